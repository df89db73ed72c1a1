//! Canonical forms for K^1-double cosets of GL_n(F) and enumeration-based
//! verifiers for the level-0 double-coset statements.
//!
//! An element decomposes as g = L * tau * R with L, R in K = GL_n(O) and
//! tau a sorted diagonal t-power matrix (elementary divisors over O). For
//! fixed tau, the K^1-double coset of g is the orbit of the residue pair
//! (L mod t, R mod t) under the image of K ∩ tau K tau^{-1} acting by
//! x -> (x mod t, tau^{-1} x^{-1} tau mod t); the canonical id is the
//! lexicographically least pair in that orbit. Orbit generation, coset
//! transversals and every verifier here run over explicit finite quotients
//! and are validated against brute-force set enumeration in the tests.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::affine::{DeltaElement, ExtAffineElement};
use crate::localfield::{
    fq_mat_mul, monomial_matrix, Config, FieldError, Fq, GroupElement, Matrix, TruncatedLaurent,
    Val,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetError {
    Field(FieldError),
    /// A support valuation left the configured window.
    WindowExceeded,
    /// An enumeration would exceed its documented feasibility bound.
    TooLarge(String),
}

impl From<FieldError> for CosetError {
    fn from(e: FieldError) -> Self {
        CosetError::Field(e)
    }
}

impl fmt::Display for CosetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetError::Field(e) => write!(f, "{e}"),
            CosetError::WindowExceeded => write!(f, "valuation window exceeded"),
            CosetError::TooLarge(s) => write!(f, "enumeration too large: {s}"),
        }
    }
}

impl std::error::Error for CosetError {}

/// Canonical name of a K^1-double coset: sorted elementary-divisor
/// valuations plus the minimized residue pair. Serialized with the
/// residue matrices as row arrays.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoubleCosetId {
    pub cartan: Vec<i64>,
    pub left: Vec<u8>,
    pub right: Vec<u8>,
}

impl fmt::Debug for DoubleCosetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coset(c={:?}, l={:?}, r={:?})",
            self.cartan, self.left, self.right
        )
    }
}

impl DoubleCosetId {
    pub fn identity(n: usize) -> Self {
        let mut left = vec![0u8; n * n];
        let mut right = vec![0u8; n * n];
        for i in 0..n {
            left[i * n + i] = 1;
            right[i * n + i] = 1;
        }
        DoubleCosetId {
            cartan: vec![0; n],
            left,
            right,
        }
    }
}

/// A double coset together with a transversal of its left K^1-cosets.
pub struct CosetList {
    pub base: DoubleCosetId,
    pub reps: Vec<GroupElement>,
}

/// Cartan form g = left * diag(t^cartan) * right, valid in the same
/// K^1-double coset up to the configured zero cut.
pub struct CartanForm {
    pub cartan: Vec<i64>,
    pub left: GroupElement,
    pub right: GroupElement,
}

pub struct CosetCtx<'a> {
    pub cfg: &'a Config,
    stab_cache: Mutex<HashMap<Vec<i64>, Arc<Vec<(Vec<u8>, Vec<u8>)>>>>,
    transversal_cache: Mutex<HashMap<Vec<i64>, Arc<Vec<GroupElement>>>>,
}

impl<'a> CosetCtx<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        CosetCtx {
            cfg,
            stab_cache: Mutex::new(HashMap::new()),
            transversal_cache: Mutex::new(HashMap::new()),
        }
    }

    fn zero_below_cut(&self, v: &TruncatedLaurent) -> Result<bool, CosetError> {
        v.is_zero_below(self.cfg.zero_cut())
            .ok_or(CosetError::Field(FieldError::PrecisionExhausted))
    }

    /// Elementary-divisor reduction over O by unimodular row and column
    /// operations, always clearing at the entry of minimal valuation, so
    /// the divisor valuations come out sorted ascending.
    pub fn cartan_form(&self, g: &GroupElement) -> Result<CartanForm, CosetError> {
        let cfg = self.cfg;
        let fq = &cfg.fq;
        let n = cfg.n;
        let mut m = g.matrix().clone();
        let mut left = Matrix::identity(n);
        let mut right = Matrix::identity(n);
        let mut cartan = Vec::with_capacity(n);
        for d in 0..n {
            // pivot: minimal certified valuation in the remaining block
            let mut best: Option<(i64, usize, usize)> = None;
            for r in d..n {
                for c in d..n {
                    match m.at(r, c).val() {
                        Val::Exact(v) => {
                            if best.map_or(true, |(bv, _, _)| v < bv) {
                                best = Some((v, r, c));
                            }
                        }
                        Val::Zero => {}
                        Val::AtLeast(b) => {
                            if b < cfg.zero_cut() {
                                return Err(CosetError::Field(FieldError::PrecisionExhausted));
                            }
                        }
                    }
                }
            }
            let Some((pv, pr, pc)) = best else {
                return Err(CosetError::Field(FieldError::NotInvertible));
            };
            // move pivot to (d, d)
            if pr != d {
                swap_rows(&mut m, pr, d);
                swap_cols(&mut left, pr, d);
            }
            if pc != d {
                swap_cols(&mut m, pc, d);
                swap_rows(&mut right, pc, d);
            }
            // normalize pivot to t^pv: scale row d by the unit inverse
            let unit = m.at(d, d).shift(-pv);
            let unit_inv = unit.inv(fq, cfg.series_len())?;
            scale_row(&mut m, d, &unit_inv, fq);
            scale_col(&mut left, d, &unit, fq);
            // clear the rest of row d and column d
            for r in (d + 1)..n {
                if self.zero_below_cut(m.at(r, d))? {
                    m.set(r, d, TruncatedLaurent::zero());
                    continue;
                }
                let f = m.at(r, d).shift(-pv);
                row_sub(&mut m, r, d, &f, fq);
                col_add(&mut left, d, r, &f, fq);
                m.set(r, d, TruncatedLaurent::zero());
            }
            for c in (d + 1)..n {
                if self.zero_below_cut(m.at(d, c))? {
                    m.set(d, c, TruncatedLaurent::zero());
                    continue;
                }
                let f = m.at(d, c).shift(-pv);
                col_sub(&mut m, c, d, &f, fq);
                row_add(&mut right, d, c, &f, fq);
                m.set(d, c, TruncatedLaurent::zero());
            }
            cartan.push(pv);
        }
        Ok(CartanForm {
            cartan,
            left: GroupElement::with_det_val(left, 0),
            right: GroupElement::with_det_val(right, 0),
        })
    }

    /// Image in GL_n(F_q) x GL_n(F_q) of K ∩ tau K tau^{-1} under
    /// x -> (x mod t, tau^{-1} x^{-1} tau mod t), generated by the
    /// one-parameter generators of K ∩ tau K tau^{-1} and closed under
    /// the twisted multiplication (u,v)(u',v') = (uu', v'v). The closure
    /// is capped; parameters that blow past it fail loudly.
    pub fn stabilizer_pairs(
        &self,
        cartan: &[i64],
    ) -> Result<Arc<Vec<(Vec<u8>, Vec<u8>)>>, CosetError> {
        if let Some(hit) = self.stab_cache.lock().unwrap().get(cartan) {
            return Ok(hit.clone());
        }
        let cfg = self.cfg;
        let fq = &cfg.fq;
        let n = cfg.n;
        let mut id = vec![0u8; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        let mut gens: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
        // diagonal units: (diag, diag^{-1})
        for i in 0..n {
            for mu in fq.units().skip(1) {
                let mut a = id.clone();
                a[i * n + i] = mu;
                let mut b = id.clone();
                b[i * n + i] = fq.inv(mu);
                gens.push((a, b));
            }
        }
        // elementary generators per off-diagonal position
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for lam in fq.units() {
                    if cartan[i] < cartan[j] {
                        let mut a = id.clone();
                        a[i * n + j] = lam;
                        gens.push((a, id.clone()));
                    } else if cartan[i] == cartan[j] {
                        let mut a = id.clone();
                        a[i * n + j] = lam;
                        let mut b = id.clone();
                        b[i * n + j] = fq.neg(lam);
                        gens.push((a, b));
                    } else {
                        let mut b = id.clone();
                        b[i * n + j] = fq.neg(lam);
                        gens.push((id.clone(), b));
                    }
                }
            }
        }
        let mut seen: std::collections::HashSet<(Vec<u8>, Vec<u8>)> =
            std::collections::HashSet::new();
        seen.insert((id.clone(), id.clone()));
        let mut frontier = vec![(id.clone(), id)];
        while let Some((u, v)) = frontier.pop() {
            for (gu, gv) in &gens {
                let nu = fq_mat_mul(fq, n, &u, gu);
                let nv = fq_mat_mul(fq, n, gv, &v);
                let key = (nu, nv);
                if seen.insert(key.clone()) {
                    frontier.push(key);
                }
            }
            if seen.len() > 4_000_000 {
                return Err(CosetError::TooLarge(format!(
                    "stabilizer orbit for cartan {cartan:?} at n={n}, q={}",
                    fq.q()
                )));
            }
        }
        let mut pairs: Vec<(Vec<u8>, Vec<u8>)> = seen.into_iter().collect();
        pairs.sort();
        let arc = Arc::new(pairs);
        self.stab_cache
            .lock()
            .unwrap()
            .insert(cartan.to_vec(), arc.clone());
        Ok(arc)
    }

    /// Canonical double-coset id. Errors with WindowExceeded when an
    /// elementary divisor leaves the window.
    pub fn canonical(&self, g: &GroupElement) -> Result<DoubleCosetId, CosetError> {
        let form = self.cartan_form(g)?;
        if form.cartan.iter().any(|&v| v.abs() > self.cfg.window) {
            return Err(CosetError::WindowExceeded);
        }
        let l = form
            .left
            .matrix()
            .residues()
            .ok_or(CosetError::Field(FieldError::PrecisionExhausted))?;
        let r = form
            .right
            .matrix()
            .residues()
            .ok_or(CosetError::Field(FieldError::PrecisionExhausted))?;
        self.minimize_pair(&form.cartan, &l, &r)
    }

    fn minimize_pair(
        &self,
        cartan: &[i64],
        l: &[u8],
        r: &[u8],
    ) -> Result<DoubleCosetId, CosetError> {
        let fq = &self.cfg.fq;
        let n = self.cfg.n;
        let pairs = self.stabilizer_pairs(cartan)?;
        // rank pairs by distance from the identity pair first, bytes
        // second: the identity double coset then gets the trivial pair
        let dist = |m: &[u8]| -> usize {
            let mut d = 0;
            for i in 0..n {
                for j in 0..n {
                    let want = u8::from(i == j);
                    if m[i * n + j] != want {
                        d += 1;
                    }
                }
            }
            d
        };
        let mut best: Option<(usize, Vec<u8>, Vec<u8>)> = None;
        for (u, v) in pairs.iter() {
            let lu = fq_mat_mul(fq, n, l, u);
            let vr = fq_mat_mul(fq, n, v, r);
            let cand = (dist(&lu) + dist(&vr), lu, vr);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        let (_, left, right) = best.unwrap();
        Ok(DoubleCosetId {
            cartan: cartan.to_vec(),
            left,
            right,
        })
    }

    /// Membership of g in the double coset named by id, decided through
    /// the cartan invariant first and an orbit scan only on matches.
    pub fn is_in_coset(&self, g: &GroupElement, id: &DoubleCosetId) -> Result<bool, CosetError> {
        let form = self.cartan_form(g)?;
        if form.cartan != id.cartan {
            return Ok(false);
        }
        let fq = &self.cfg.fq;
        let n = self.cfg.n;
        let l = form
            .left
            .matrix()
            .residues()
            .ok_or(CosetError::Field(FieldError::PrecisionExhausted))?;
        let r = form
            .right
            .matrix()
            .residues()
            .ok_or(CosetError::Field(FieldError::PrecisionExhausted))?;
        let pairs = self.stabilizer_pairs(&form.cartan)?;
        for (u, v) in pairs.iter() {
            if fq_mat_mul(fq, n, &l, u) == id.left && fq_mat_mul(fq, n, v, &r) == id.right {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A representative element of the double coset.
    pub fn rep_of(&self, id: &DoubleCosetId) -> GroupElement {
        let cfg = self.cfg;
        let n = cfg.n;
        let l = GroupElement::with_det_val(Matrix::from_residues(n, &id.left), 0);
        let r = GroupElement::with_det_val(Matrix::from_residues(n, &id.right), 0);
        let tau = diag_t_matrix(cfg, &id.cartan);
        l.mul(&tau, &cfg.fq).mul(&r, &cfg.fq)
    }

    /// Transversal of K^1 / (K^1 ∩ tau K^1 tau^{-1}) for the diagonal
    /// t-power matrix with the given sorted valuations, built by breadth
    /// first search over one-parameter generators with an exact coset
    /// membership test, then checked against the index formula
    /// q^(sum over i,j of max(0, c_i - c_j)).
    fn tau_transversal(&self, cartan: &[i64]) -> Result<Arc<Vec<GroupElement>>, CosetError> {
        if let Some(hit) = self.transversal_cache.lock().unwrap().get(cartan) {
            return Ok(hit.clone());
        }
        let cfg = self.cfg;
        let fq = &cfg.fq;
        let n = cfg.n;
        let q = fq.q() as u64;
        let mut log_index = 0i64;
        for i in 0..n {
            for j in 0..n {
                log_index += (cartan[i] - cartan[j]).max(0);
            }
        }
        let expected = (q as u128).checked_pow(log_index as u32).and_then(|v| {
            if v <= 1 << 20 {
                Some(v as usize)
            } else {
                None
            }
        });
        let Some(expected) = expected else {
            return Err(CosetError::TooLarge(format!(
                "left-coset index q^{log_index} for cartan {cartan:?}"
            )));
        };
        // z in K^1 ∩ tau K^1 tau^{-1} iff (z - I)_{ij} in t^{1 + max(0, c_i - c_j)} O
        let in_subgroup = |z: &GroupElement| -> Result<bool, CosetError> {
            for i in 0..n {
                for j in 0..n {
                    let e = if i == j {
                        z.matrix().at(i, j).sub(&TruncatedLaurent::one(), fq)
                    } else {
                        z.matrix().at(i, j).clone()
                    };
                    let bound = 1 + (cartan[i] - cartan[j]).max(0);
                    match e.is_zero_below(bound) {
                        Some(true) => {}
                        Some(false) => return Ok(false),
                        None => return Err(CosetError::Field(FieldError::PrecisionExhausted)),
                    }
                }
            }
            Ok(true)
        };
        // one-parameter generators of K^1 that can move a coset
        let mut gens: Vec<GroupElement> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = (cartan[i] - cartan[j]).max(0);
                for m in 1..=d {
                    for lam in fq.units() {
                        let mut mat = Matrix::identity(n);
                        mat.set(i, j, TruncatedLaurent::monomial(lam, m));
                        gens.push(GroupElement::with_det_val(mat, 0));
                    }
                }
            }
        }
        let mut reps: Vec<GroupElement> = vec![GroupElement::identity(n)];
        let mut rep_invs: Vec<GroupElement> = vec![GroupElement::identity(n)];
        let mut frontier = vec![0usize];
        while let Some(k) = frontier.pop() {
            let base = reps[k].clone();
            for g in &gens {
                let cand = base.mul(g, fq);
                let mut found = false;
                for inv in &rep_invs {
                    if in_subgroup(&inv.mul(&cand, fq))? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    let inv = cand.inverse(cfg)?;
                    reps.push(cand);
                    rep_invs.push(inv);
                    frontier.push(reps.len() - 1);
                    if reps.len() > expected {
                        return Err(CosetError::TooLarge(format!(
                            "transversal overflow for cartan {cartan:?}"
                        )));
                    }
                }
            }
        }
        if reps.len() != expected {
            return Err(CosetError::TooLarge(format!(
                "transversal count {} != q^{log_index} for cartan {cartan:?}",
                reps.len()
            )));
        }
        let arc = Arc::new(reps);
        self.transversal_cache
            .lock()
            .unwrap()
            .insert(cartan.to_vec(), arc.clone());
        Ok(arc)
    }

    /// Representatives of the left K^1-cosets inside K^1 x K^1: with
    /// x = L tau R these are L r_i tau R over the tau-transversal r_i.
    pub fn left_coset_reps(&self, x: &GroupElement) -> Result<CosetList, CosetError> {
        let cfg = self.cfg;
        let fq = &cfg.fq;
        let form = self.cartan_form(x)?;
        if form.cartan.iter().any(|&v| v.abs() > cfg.window) {
            return Err(CosetError::WindowExceeded);
        }
        let trans = self.tau_transversal(&form.cartan)?;
        let tau = diag_t_matrix(cfg, &form.cartan);
        let tail = tau.mul(&form.right, fq);
        let reps = trans
            .iter()
            .map(|r| form.left.mul(r, fq).mul(&tail, fq))
            .collect();
        let l = form.left.matrix().residues().unwrap();
        let r = form.right.matrix().residues().unwrap();
        Ok(CosetList {
            base: self.minimize_pair(&form.cartan, &l, &r),
            reps,
        })
    }

    /// K^1 tau K^1 tau' K^1 = K^1 tau tau' K^1: every left-coset
    /// representative of the first factor, multiplied by tau', lands in
    /// the double coset of tau tau'.
    pub fn verify_tau_products(
        &self,
        tau: &DeltaElement,
        tau2: &DeltaElement,
    ) -> Result<bool, CosetError> {
        let cfg = self.cfg;
        let prod = tau.mul(tau2);
        if prod.valuations().iter().any(|&v| v.abs() > cfg.window) {
            return Err(CosetError::WindowExceeded);
        }
        let tau_m = monomial_matrix(cfg, &tau.to_ext());
        let tau2_m = monomial_matrix(cfg, &tau2.to_ext());
        let target = self.canonical(&tau_m.mul(&tau2_m, &cfg.fq))?;
        let list = self.left_coset_reps(&tau_m)?;
        for rep in &list.reps {
            if !self.is_in_coset(&rep.mul(&tau2_m, &cfg.fq), &target)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks K^1 U^- K^1 ∩ U = K^1 ∩ U on an exhaustive window of upper
    /// unipotent samples.
    ///
    /// Decision procedure per sample u: if every strict upper entry lies
    /// in tO then u is in K^1 and membership is trivially consistent.
    /// Otherwise some entry has certified valuation <= 0, and its leading
    /// coefficient survives any K^1-pair translation (corrections carry
    /// at least one extra factor of t), so u cannot lie in K^1 U^- K^1;
    /// that is the valuation-pattern pruning. A bounded exhaustive search
    /// over K^1-pair representatives re-checks a slice of the excluded
    /// samples: it must find no pair making u congruent to a lower
    /// unitriangular matrix modulo t^threshold.
    pub fn verify_absorption(
        &self,
        pair_depth: usize,
        max_enumerated: usize,
    ) -> Result<AbsorptionOutcome, CosetError> {
        let cfg = self.cfg;
        let fq = &cfg.fq;
        let n = cfg.n;
        let v = cfg.window;
        let samples = enumerate_unipotent_window(cfg, -v, (2 * v + 1) as usize)?;
        let mut out = AbsorptionOutcome {
            samples: samples.len(),
            in_k1: 0,
            excluded_by_valuation: 0,
            enumeration_validated: 0,
            counterexamples: 0,
        };
        let pairs = if max_enumerated > 0 {
            enumerate_k1_mod(cfg, pair_depth)?
        } else {
            Vec::new()
        };
        let pair_invs: Vec<GroupElement> = pairs
            .iter()
            .map(|k| k.inverse(cfg))
            .collect::<Result<_, _>>()?;
        let threshold = (pair_depth as i64 - v).max(1);
        for u in &samples {
            let mut min_val: Option<i64> = None;
            for r in 0..n {
                for c in (r + 1)..n {
                    if let Val::Exact(val) = u.matrix().at(r, c).val() {
                        min_val = Some(min_val.map_or(val, |m: i64| m.min(val)));
                    }
                }
            }
            match min_val {
                None | Some(1..) => {
                    out.in_k1 += 1;
                }
                Some(_) => {
                    out.excluded_by_valuation += 1;
                    if out.enumeration_validated < max_enumerated {
                        out.enumeration_validated += 1;
                        // search for k1^-1 u k2^-1 congruent to a lower
                        // unitriangular matrix mod t^threshold
                        let mut witness = false;
                        'pairs: for k1_inv in &pair_invs {
                            let left = k1_inv.mul(u, fq);
                            for k2_inv in &pair_invs {
                                let z = left.mul(k2_inv, fq);
                                let mut lower_mod = true;
                                'entries: for r in 0..n {
                                    for c in r..n {
                                        let e = if r == c {
                                            z.matrix().at(r, c).sub(&TruncatedLaurent::one(), fq)
                                        } else {
                                            z.matrix().at(r, c).clone()
                                        };
                                        if e.is_zero_below(threshold) != Some(true) {
                                            lower_mod = false;
                                            break 'entries;
                                        }
                                    }
                                }
                                if lower_mod {
                                    witness = true;
                                    break 'pairs;
                                }
                            }
                        }
                        if witness {
                            out.counterexamples += 1;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bounded check of the monomial-intersection statement: enumerate
    /// pairs (x, y) from the depth-truncated I-tilde quotient and collect
    /// the monomial classes of x * (tau z) * y. The contract is that no
    /// class other than tau's ever appears; with z = 1 the class of tau
    /// itself must appear.
    ///
    /// The scan works on packed coefficient arrays (all operands are
    /// exact Laurent polynomials) and aborts a product as soon as a row
    /// acquires a second nonzero entry. Work is split across threads when
    /// HECKE_THREADS (or the machine) allows; the collected class set is
    /// order-independent.
    pub fn verify_monomial_intersection(
        &self,
        tau: &DeltaElement,
        z: &GroupElement,
        depth: usize,
    ) -> Result<MonomialIntersection, CosetError> {
        let cfg = self.cfg;
        let fq = &cfg.fq;
        let n = cfg.n;
        let tau_ext = tau.to_ext();
        if tau.valuations().iter().any(|&v| v.abs() > cfg.window) {
            return Err(CosetError::WindowExceeded);
        }
        let tau_m = monomial_matrix(cfg, &tau_ext);
        let core = tau_m.mul(z, fq);
        let quotient = enumerate_itilde1_mod(cfg, depth)?;
        // packed window: entries of x * core * y live in exponent range
        // [0, width): x, y have polynomial entries of degree < depth and
        // core's entries are exact polynomials; the window covers the
        // full product support, so the monomial test is exact
        let mut core_hi = 1i64;
        for r in 0..n {
            for c in 0..n {
                core_hi = core_hi.max(poly_top_exclusive(core.matrix().at(r, c)));
            }
        }
        let width = (2 * (depth as i64 - 1) + core_hi + 1).max(4) as usize;
        let packed_core = PackedMat::from_group_element(&core, width);
        let packed_q: Vec<PackedMat> = quotient
            .iter()
            .map(|g| PackedMat::from_group_element(g, width))
            .collect();
        let threads = std::env::var("HECKE_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .or_else(|| std::thread::available_parallelism().ok().map(|v| v.get()))
            .unwrap_or(1)
            .max(1);
        let chunk = packed_q.len().div_ceil(threads);
        let results: Vec<(Vec<ExtAffineElement>, u64)> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for part in packed_q.chunks(chunk) {
                let packed_core = &packed_core;
                let packed_q = &packed_q;
                handles.push(scope.spawn(move || {
                    let fq = &cfg.fq;
                    let mut classes: Vec<ExtAffineElement> = Vec::new();
                    let mut scanned = 0u64;
                    let mut xc = PackedMat::zero(packed_core.n, packed_core.w);
                    let mut prod = PackedMat::zero(packed_core.n, packed_core.w);
                    for x in part {
                        xc.assign_mul(x, packed_core, fq);
                        for y in packed_q {
                            scanned += 1;
                            if let Some(ext) = prod.mul_monomial_class(&xc, y, fq) {
                                if !classes.contains(&ext) {
                                    classes.push(ext);
                                }
                            }
                        }
                    }
                    (classes, scanned)
                }));
            }
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut classes: Vec<ExtAffineElement> = Vec::new();
        let mut pairs_scanned = 0;
        for (cl, sc) in results {
            pairs_scanned += sc;
            for c in cl {
                if !classes.contains(&c) {
                    classes.push(c);
                }
            }
        }
        let contains_tau = classes.contains(&tau_ext);
        Ok(MonomialIntersection {
            classes,
            pairs_scanned,
            contains_tau,
            tau_class: tau_ext,
        })
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    let n = m.n();
    for c in 0..n {
        let x = m.at(a, c).clone();
        let y = m.at(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    let n = m.n();
    for r in 0..n {
        let x = m.at(r, a).clone();
        let y = m.at(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

fn scale_row(m: &mut Matrix, r: usize, f: &TruncatedLaurent, fq: &Fq) {
    let n = m.n();
    for c in 0..n {
        m.set(r, c, m.at(r, c).mul(f, fq));
    }
}

fn scale_col(m: &mut Matrix, c: usize, f: &TruncatedLaurent, fq: &Fq) {
    let n = m.n();
    for r in 0..n {
        m.set(r, c, m.at(r, c).mul(f, fq));
    }
}

/// row r -= f * row p
fn row_sub(m: &mut Matrix, r: usize, p: usize, f: &TruncatedLaurent, fq: &Fq) {
    let n = m.n();
    for c in 0..n {
        let s = f.mul(m.at(p, c), fq);
        m.set(r, c, m.at(r, c).sub(&s, fq));
    }
}

/// column p += f * column r (inverse transform of row_sub, applied to the
/// left accumulator)
fn col_add(m: &mut Matrix, p: usize, r: usize, f: &TruncatedLaurent, fq: &Fq) {
    let n = m.n();
    for i in 0..n {
        let s = f.mul(m.at(i, r), fq);
        m.set(i, p, m.at(i, p).add(&s, fq));
    }
}

/// col c -= f * col p
fn col_sub(m: &mut Matrix, c: usize, p: usize, f: &TruncatedLaurent, fq: &Fq) {
    let n = m.n();
    for r in 0..n {
        let s = f.mul(m.at(r, p), fq);
        m.set(r, c, m.at(r, c).sub(&s, fq));
    }
}

/// row p += f * row c (inverse transform of col_sub, applied to the right
/// accumulator)
fn row_add(m: &mut Matrix, p: usize, c: usize, f: &TruncatedLaurent, fq: &Fq) {
    let n = m.n();
    for j in 0..n {
        let s = f.mul(m.at(c, j), fq);
        m.set(p, j, m.at(p, j).add(&s, fq));
    }
}

/// diag(t^{c_0}, ..., t^{c_{n-1}}) as a group element.
pub fn diag_t_matrix(cfg: &Config, cartan: &[i64]) -> GroupElement {
    let n = cfg.n;
    let mut m = Matrix::zero(n);
    for i in 0..n {
        m.set(i, i, TruncatedLaurent::monomial(1, cartan[i]));
    }
    GroupElement::with_det_val(m, cartan.iter().sum())
}

/// All exact polynomials with `len` coefficients starting at t^lead.
pub fn enumerate_polys(q: u64, lead: i64, len: usize) -> Vec<TruncatedLaurent> {
    let total = (q as u128).pow(len as u32) as usize;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let coeffs: Vec<u8> = (0..len)
            .map(|_| {
                let v = (c % q as usize) as u8;
                c /= q as usize;
                v
            })
            .collect();
        out.push(TruncatedLaurent::poly(lead, coeffs));
    }
    out
}

/// All elements of K^1 modulo t^depth (entries I + t * poly with
/// depth - 1 coefficients), as exact lifts.
pub fn enumerate_k1_mod(cfg: &Config, depth: usize) -> Result<Vec<GroupElement>, CosetError> {
    let n = cfg.n;
    let q = cfg.q();
    let per_entry = enumerate_polys(q, 1, depth - 1);
    let cells = (n * n) as u32;
    let total = (per_entry.len() as u128).pow(cells);
    if total > 1 << 22 {
        return Err(CosetError::TooLarge(format!(
            "|K^1 mod t^{depth}| = {total} at n={n}, q={q}"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let base = per_entry.len() as u128;
    for code in 0..total {
        let mut c = code;
        let mat = Matrix::from_fn(n, |r, cc| {
            let pick = per_entry[(c % base) as usize].clone();
            c /= base;
            if r == cc {
                pick.add(&TruncatedLaurent::one(), &cfg.fq)
            } else {
                pick
            }
        });
        out.push(GroupElement::with_det_val(mat, 0));
    }
    Ok(out)
}

/// All elements of the I-tilde group modulo t^depth: diagonal 1 + t*poly,
/// above-diagonal poly from t^0, below-diagonal t*poly.
pub fn enumerate_itilde1_mod(cfg: &Config, depth: usize) -> Result<Vec<GroupElement>, CosetError> {
    let n = cfg.n;
    let q = cfg.q();
    let diag = enumerate_polys(q, 1, depth - 1);
    let upper = enumerate_polys(q, 0, depth);
    let lower = enumerate_polys(q, 1, depth - 1);
    let mut log: u32 = 0;
    for r in 0..n {
        for c in 0..n {
            log += if r == c || r > c {
                (depth - 1) as u32
            } else {
                depth as u32
            };
        }
    }
    let total = (q as u128).pow(log);
    if total > 1 << 22 {
        return Err(CosetError::TooLarge(format!(
            "|Itilde mod t^{depth}| = {total} at n={n}, q={q}"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut stack: Vec<(usize, Matrix)> = vec![(0, Matrix::identity(n))];
    while let Some((cell, mat)) = stack.pop() {
        if cell == n * n {
            out.push(GroupElement::with_det_val(mat, 0));
            continue;
        }
        let (r, c) = (cell / n, cell % n);
        let choices: &[TruncatedLaurent] = if r == c {
            &diag
        } else if r < c {
            &upper
        } else {
            &lower
        };
        for choice in choices {
            let mut m2 = mat.clone();
            let v = if r == c {
                choice.add(&TruncatedLaurent::one(), &cfg.fq)
            } else {
                choice.clone()
            };
            m2.set(r, c, v);
            stack.push((cell + 1, m2));
        }
    }
    Ok(out)
}

/// Exhaustive unipotent upper-triangular matrices with entries running
/// over exact Laurent polynomials on exponents lead..lead+len.
pub fn enumerate_unipotent_window(
    cfg: &Config,
    lead: i64,
    len: usize,
) -> Result<Vec<GroupElement>, CosetError> {
    let n = cfg.n;
    let q = cfg.q();
    let per_entry = enumerate_polys(q, lead, len);
    let cells = (n * (n - 1) / 2) as u32;
    let total = (per_entry.len() as u128).pow(cells);
    if total > 1 << 22 {
        return Err(CosetError::TooLarge(format!(
            "unipotent window enumeration {total} at n={n}"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let base = per_entry.len() as u128;
    for code in 0..total {
        let mut c = code;
        let mut mat = Matrix::identity(n);
        for r in 0..n {
            for cc in (r + 1)..n {
                mat.set(r, cc, per_entry[(c % base) as usize].clone());
                c /= base;
            }
        }
        out.push(GroupElement::with_det_val(mat, 0));
    }
    Ok(out)
}

/// Outcome of the unipotent-absorption check.
#[derive(Debug, Serialize)]
pub struct AbsorptionOutcome {
    pub samples: usize,
    pub in_k1: usize,
    pub excluded_by_valuation: usize,
    pub enumeration_validated: usize,
    pub counterexamples: usize,
}

impl AbsorptionOutcome {
    pub fn consistent(&self) -> bool {
        self.counterexamples == 0 && self.in_k1 + self.excluded_by_valuation == self.samples
    }
}

/// One-past the largest exponent carrying a nonzero coefficient of an
/// exact polynomial with nonnegative support.
fn poly_top_exclusive(v: &TruncatedLaurent) -> i64 {
    let mut top = 0i64;
    for k in 0..64 {
        if v.coeff_at(k) != Some(0) {
            top = k + 1;
        }
    }
    top
}

/// Exact integral matrix packed as raw coefficient arrays on the
/// exponent window [0, w): the workhorse of the monomial scan. Entry
/// (r, c) occupies a[(r*n + c)*w .. +w].
struct PackedMat {
    n: usize,
    w: usize,
    a: Vec<u8>,
}

impl PackedMat {
    fn zero(n: usize, w: usize) -> Self {
        PackedMat {
            n,
            w,
            a: vec![0; n * n * w],
        }
    }

    fn from_group_element(g: &GroupElement, w: usize) -> Self {
        let n = g.n();
        let mut m = Self::zero(n, w);
        for r in 0..n {
            for c in 0..n {
                for k in 0..w {
                    m.a[(r * n + c) * w + k] = g
                        .matrix()
                        .at(r, c)
                        .coeff_at(k as i64)
                        .expect("packed matrices require exact integral entries");
                }
            }
        }
        m
    }

    /// self = x * b, truncated to the window (callers size the window to
    /// cover the full support).
    fn assign_mul(&mut self, x: &PackedMat, b: &PackedMat, fq: &Fq) {
        let (n, w) = (self.n, self.w);
        self.a.fill(0);
        for r in 0..n {
            for k in 0..n {
                let xe = &x.a[(r * n + k) * w..(r * n + k) * w + w];
                for c in 0..n {
                    let be = &b.a[(k * n + c) * w..(k * n + c) * w + w];
                    let off = (r * n + c) * w;
                    for (i, &xi) in xe.iter().enumerate() {
                        if xi == 0 {
                            continue;
                        }
                        for (j, &bj) in be.iter().take(w - i).enumerate() {
                            if bj != 0 {
                                let t = &mut self.a[off + i + j];
                                *t = fq.add(*t, fq.mul(xi, bj));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Computes a * y into self row by row, aborting as soon as the
    /// product cannot be monomial; on success returns the monomial class
    /// (permutation and valuation data, units forgotten).
    fn mul_monomial_class(
        &mut self,
        a: &PackedMat,
        y: &PackedMat,
        fq: &Fq,
    ) -> Option<ExtAffineElement> {
        let (n, w) = (self.n, self.w);
        let mut col_of_row = vec![usize::MAX; n];
        let mut col_used = vec![false; n];
        for r in 0..n {
            let mut nonzero_col = usize::MAX;
            for c in 0..n {
                let off = (r * n + c) * w;
                self.a[off..off + w].fill(0);
                for k in 0..n {
                    let ae = &a.a[(r * n + k) * w..(r * n + k) * w + w];
                    let ye = &y.a[(k * n + c) * w..(k * n + c) * w + w];
                    for (i, &ai) in ae.iter().enumerate() {
                        if ai == 0 {
                            continue;
                        }
                        for (j, &yj) in ye.iter().take(w - i).enumerate() {
                            if yj != 0 {
                                let t = &mut self.a[off + i + j];
                                *t = fq.add(*t, fq.mul(ai, yj));
                            }
                        }
                    }
                }
                if self.a[off..off + w].iter().any(|&v| v != 0) {
                    if nonzero_col != usize::MAX {
                        return None; // second nonzero entry in this row
                    }
                    nonzero_col = c;
                }
            }
            if nonzero_col == usize::MAX || col_used[nonzero_col] {
                return None;
            }
            col_used[nonzero_col] = true;
            col_of_row[r] = nonzero_col;
        }
        // permutation: column j maps to row r with col_of_row[r] = j
        let mut images = vec![0usize; n];
        let mut exps = vec![0i64; n];
        for r in 0..n {
            let c = col_of_row[r];
            images[c] = r + 1;
            let off = (r * n + c) * w;
            let lead = self.a[off..off + w].iter().position(|&v| v != 0).unwrap();
            exps[c] = lead as i64;
        }
        Some(
            ExtAffineElement::from_perm(crate::weyl::Permutation::from_images(images))
                .mul(&ExtAffineElement::from_exps(exps)),
        )
    }
}

#[derive(Debug)]
pub struct MonomialIntersection {
    pub classes: Vec<ExtAffineElement>,
    pub pairs_scanned: u64,
    pub contains_tau: bool,
    pub tau_class: ExtAffineElement,
}

impl MonomialIntersection {
    /// True when every monomial class found is tau's.
    pub fn only_tau_class(&self) -> bool {
        self.classes.iter().all(|c| *c == self.tau_class)
    }
}
