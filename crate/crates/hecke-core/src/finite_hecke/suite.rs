//! Named check batteries over one (G, H, sigma) instance: the
//! endomorphism-algebra isomorphism, Frobenius reciprocity dimensions,
//! the image identity of the module functor, the four-condition
//! agreement on crafted objects, and the object-wise equivalence data.

use super::algebra::FiniteHecke;
use super::functor::{
    check_tfae, equivalence_checks, frobenius_dims, functor_m_identity, m_sigma,
};
use super::instances::Instance;
use super::rep::{induce, Rep};
use super::FhError;
use crate::report::Check;

/// Crafted objects for one instance: the induced representation itself,
/// every irreducible, and a mixed direct sum.
fn crafted_objects(inst: &Instance) -> Result<Vec<(String, Rep)>, FhError> {
    let ind = induce(&inst.group, &inst.h, &inst.sigma)?;
    let mut out: Vec<(String, Rep)> = vec![("induced".into(), ind.rep)];
    for (name, rep) in &inst.irreducibles {
        out.push((name.clone(), rep.clone()));
    }
    // a two-summand mix
    let a = &inst.irreducibles[0].1;
    let b = inst.irreducibles.last().unwrap();
    out.push((format!("{}+{}", inst.irreducibles[0].0, b.0), a.direct_sum(&b.1)));
    Ok(out)
}

pub fn run_instance_suite(inst: &Instance) -> Result<Vec<Check>, FhError> {
    let mut checks = Vec::new();
    let fh = FiniteHecke::new(&inst.group, inst.h.clone(), inst.sigma.clone())?;

    // dimension bookkeeping: dim H = sum of intertwiner dimensions =
    // dim End_G(ind sigma), the last computed by an independent
    // commutant solve
    let dim_h = fh.dimension();
    let end_dim = fh.end_of_induced_basis().len();
    checks.push(Check::of(
        format!("{}_dimension_match", inst.name),
        dim_h == end_dim,
        format!("dim algebra {dim_h}, dim End(ind) {end_dim}"),
    ));

    // xi is an algebra isomorphism on the basis
    let basis = fh.basis_elements();
    let mut mult_ok = true;
    let mut inv_ok = true;
    for a in &basis {
        for b in &basis {
            if fh.xi(&fh.convolve(a, b)) != fh.xi(a).mul(&fh.xi(b)) {
                mult_ok = false;
            }
        }
        if fh.xi_inv(&fh.xi(a)) != *a {
            inv_ok = false;
        }
    }
    // xi surjects onto the independently computed commutant: the images
    // of the basis span a space of the commutant's dimension
    let images: Vec<Vec<crate::coeff::Coefficient>> = basis
        .iter()
        .map(|a| {
            let m = fh.xi(a);
            let mut flat = Vec::new();
            for r in 0..fh.induced.rep.dim {
                flat.extend(m.row(r));
            }
            flat
        })
        .collect();
    let image_rank = crate::finite_hecke::Subspace::from_vectors(
        fh.domain,
        fh.induced.rep.dim * fh.induced.rep.dim,
        &images,
    )
    .dim();
    checks.push(Check::of(
        format!("{}_xi_multiplicative", inst.name),
        mult_ok,
        format!("{} basis pairs", basis.len() * basis.len()),
    ));
    checks.push(Check::of(
        format!("{}_xi_bijective", inst.name),
        inv_ok && image_rank == end_dim,
        format!("xi image rank {image_rank} of {end_dim}"),
    ));

    // Frobenius reciprocity dimensions on every irreducible
    for (name, rep) in &inst.irreducibles {
        let (hom_k, hom_g) = frobenius_dims(&fh, rep)?;
        checks.push(Check::of(
            format!("{}_frobenius_{name}", inst.name),
            hom_k == hom_g,
            format!("dim Hom_K(sigma, V) = {hom_k}, dim Hom_G(ind, V) = {hom_g}"),
        ));
    }

    // module-functor image identity and four-condition agreement on the
    // crafted objects
    for (name, rep) in crafted_objects(inst)? {
        let fm = functor_m_identity(&fh, &rep)?;
        checks.push(Check::of(
            format!("{}_functor_image_{name}", inst.name),
            fm,
            "V[sigma] equals the sum of the functor images",
        ));
        let tfae = check_tfae(&fh, &rep)?;
        checks.push(Check::of(
            format!("{}_tfae_{name}", inst.name),
            tfae.agree(),
            format!(
                "conditions {:?}, lattice {}, {} subquotients",
                tfae.conditions, tfae.lattice_size, tfae.checked_subquotients
            ),
        ));
    }

    // object-wise equivalence data on sigma-generated objects
    let mut generated: Vec<(String, Rep)> = Vec::new();
    for (name, rep) in crafted_objects(inst)? {
        if m_sigma(&fh, &rep)?.len() > 0 {
            let tf = check_tfae(&fh, &rep)?;
            if tf.conditions[0] {
                generated.push((name, rep));
            }
        }
    }
    let refs: Vec<(&str, Rep)> = generated
        .iter()
        .map(|(n, r)| (n.as_str(), r.clone()))
        .collect();
    checks.extend(equivalence_checks(&fh, &refs)?);
    Ok(checks)
}
