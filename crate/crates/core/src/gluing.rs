//! The certification layer: one trivial logarithmic connection on the
//! rank-2k bundle over C^k, pushed through the two relation matrices, must
//! reproduce the residue structure computed independently on each side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

use crate::error::Error;
use crate::matrix::{rank, IntMatrix};
use crate::periods::gm_topological_connection;
use crate::quantum::{dubrovin_residue, ExtremalModel};
use crate::scalar::{Scalar, ScalarMatrix};
use crate::series::TruncatedSeries;
use crate::transition::TransitionPresentation;

/// A connection d + Σ_i (form_i = 0 locus) ⊗ residue_i + remainder on a
/// trivialized bundle. Residues are constant matrices over Q[λ, z⁻¹]; the
/// optional remainder is a holomorphic matrix of series, zero when absent.
/// A zero form is tolerated only with a zero residue (degenerate nodes).
#[derive(Clone)]
pub struct LogConnection {
    base: usize,
    dim: usize,
    forms: Vec<Vec<BigInt>>,
    residues: Vec<ScalarMatrix>,
    remainder: Option<Vec<TruncatedSeries>>,
}

impl LogConnection {
    pub fn new(
        base: usize,
        dim: usize,
        forms: Vec<Vec<BigInt>>,
        residues: Vec<ScalarMatrix>,
    ) -> Result<Self, Error> {
        if forms.len() != residues.len() {
            return Err(Error::Dimension(format!(
                "{} forms against {} residues",
                forms.len(),
                residues.len()
            )));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.len() != base {
                return Err(Error::Dimension(format!("form {i} has length {}", f.len())));
            }
            if f.iter().all(BigInt::is_zero) && !residues[i].is_zero() {
                return Err(Error::InvalidPresentation(format!(
                    "zero form {i} carries a nonzero residue"
                )));
            }
        }
        for (i, r) in residues.iter().enumerate() {
            if r.rows() != dim || r.cols() != dim {
                return Err(Error::Dimension(format!(
                    "residue {i} is {}×{}, bundle rank is {dim}",
                    r.rows(),
                    r.cols()
                )));
            }
        }
        Ok(LogConnection { base, dim, forms, residues, remainder: None })
    }

    pub fn with_remainder(mut self, remainder: Vec<TruncatedSeries>) -> Result<Self, Error> {
        if remainder.len() != self.dim * self.dim {
            return Err(Error::Dimension(format!(
                "remainder has {} entries, need {}",
                remainder.len(),
                self.dim * self.dim
            )));
        }
        self.remainder = Some(remainder);
        Ok(self)
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> usize {
        self.forms.len()
    }

    pub fn form(&self, i: usize) -> &[BigInt] {
        &self.forms[i]
    }

    pub fn residue(&self, i: usize) -> &ScalarMatrix {
        &self.residues[i]
    }

    pub fn remainder(&self) -> Option<&[TruncatedSeries]> {
        self.remainder.as_deref()
    }

    /// Merges residues of proportional forms (d(cw)/(cw) = dw/w, so they
    /// add without rescaling) and drops degenerate zero-form entries.
    /// Forms come out primitive with positive leading coefficient, sorted.
    pub fn deduplicated(&self) -> LogConnection {
        let mut merged: BTreeMap<Vec<BigInt>, ScalarMatrix> = BTreeMap::new();
        for (f, r) in self.forms.iter().zip(&self.residues) {
            let Some(hat) = primitive_form(f) else { continue };
            match merged.get_mut(&hat) {
                Some(acc) => *acc = acc.add(r),
                None => {
                    merged.insert(hat, r.clone());
                }
            }
        }
        let (forms, residues) = merged.into_iter().unzip();
        LogConnection {
            base: self.base,
            dim: self.dim,
            forms,
            residues,
            remainder: self.remainder.clone(),
        }
    }
}

fn primitive_form(f: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_integer::Integer;
    use num_traits::Signed;
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return None;
    }
    if f.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    Some(f.iter().map(|c| c / &g).collect())
}

/// The connection d + (1/z)·Σ_i dy_i/y_i ⊗ (e^i ⊗ e_i*) on (C ⊕ C^∨)^k:
/// one coordinate hyperplane per factor, each residue a single matrix unit
/// sending the i-th primal vector to the i-th dual vector.
pub fn trivial_log_connection(k: usize) -> LogConnection {
    let mut forms = Vec::with_capacity(k);
    let mut residues = Vec::with_capacity(k);
    for i in 0..k {
        let mut f = vec![BigInt::zero(); k];
        f[i] = BigInt::from(1);
        forms.push(f);
        let mut r = ScalarMatrix::zeros(2 * k, 2 * k);
        r.set(k + i, i, Scalar::z_inv());
        residues.push(r);
    }
    LogConnection::new(k, 2 * k, forms, residues).expect("shapes fixed by construction")
}

/// Pushes the trivial connection through the embedding C^m → C^k given by a
/// full-column-rank matrix M, with orthogonal projection back: the residue
/// along the pulled-back hyperplane (row i of M) becomes the matrix unit
/// conjugated to (1/z)·Mᵗ·E_ii·M, sitting in the dual×primal block.
pub fn induce_via_embedding(k: usize, m: &IntMatrix) -> Result<LogConnection, Error> {
    if m.rows() != k {
        return Err(Error::Dimension(format!("embedding needs {k} rows, got {}", m.rows())));
    }
    let cols = m.cols();
    if rank(m) != cols {
        return Err(Error::InvalidPresentation(
            "embedding matrix has dependent columns".into(),
        ));
    }
    let mut forms = Vec::with_capacity(k);
    let mut residues = Vec::with_capacity(k);
    for i in 0..k {
        forms.push(m.row(i));
        let mut unit = IntMatrix::zeros(k, k);
        unit.set(i, i, BigInt::from(1));
        let block = m.transpose().mul(&unit).mul(m);
        let mut r = ScalarMatrix::zeros(2 * cols, 2 * cols);
        for n in 0..cols {
            for l in 0..cols {
                let c = BigRational::from(block.get(n, l).clone());
                if !c.is_zero() {
                    r.set(cols + n, l, Scalar::monomial(0, 1, c));
                }
            }
        }
        residues.push(r);
    }
    LogConnection::new(cols, 2 * cols, forms, residues)
}

/// Outcome of gluing both sides to the trivial connection. The two
/// substitution records state the parameter identifications under which the
/// residue comparisons are made; they are part of the claim, not applied
/// silently to any series.
#[derive(Clone, Debug)]
pub struct GlueReport {
    /// First (j, l) with (AᵗB)[j][l] ≠ 0, if any.
    pub orthogonality_mismatch: Option<(usize, usize)>,
    /// det [A | B]; zero when the matrix is not square or singular.
    pub splitting_det: BigInt,
    pub dubrovin_substitution: String,
    /// First residue disagreement on the sphere side, if any.
    pub dubrovin_mismatch: Option<String>,
    pub gauss_manin_substitution: String,
    /// First residue disagreement on the curve side, if any.
    pub gauss_manin_mismatch: Option<String>,
}

impl GlueReport {
    /// The sphere-side identification: induced residues equal the quantum
    /// connection residues node by node.
    pub fn dubrovin_glued(&self) -> bool {
        self.orthogonality_mismatch.is_none() && self.dubrovin_mismatch.is_none()
    }

    /// The curve-side identification: the splitting is invertible and the
    /// induced residues equal the topological Gauss–Manin residues.
    pub fn gauss_manin_glued(&self) -> bool {
        !self.splitting_det.is_zero() && self.gauss_manin_mismatch.is_none()
    }

    pub fn passed(&self) -> bool {
        self.dubrovin_glued() && self.gauss_manin_glued()
    }
}

/// Runs both residue comparisons for a presentation.
pub fn glue_check(p: &TransitionPresentation) -> Result<GlueReport, Error> {
    let k = p.k;
    let prod = p.a.transpose().mul(&p.b);
    let mut orthogonality_mismatch = None;
    'scan: for j in 0..prod.rows() {
        for l in 0..prod.cols() {
            if !prod.get(j, l).is_zero() {
                orthogonality_mismatch = Some((j, l));
                break 'scan;
            }
        }
    }
    let stacked = p.a.hstack(&p.b);
    let splitting_det =
        if stacked.rows() == stacked.cols() { stacked.det() } else { BigInt::zero() };

    let model = ExtremalModel::new(p.clone(), 1);
    let rho = p.rho();
    let dubrovin_mismatch = match induce_via_embedding(k, &p.b) {
        Err(e) => Some(format!("sphere matrix does not embed: {e}")),
        Ok(induced) => {
            let mut found = None;
            'nodes: for i in 0..k {
                let expected = dubrovin_residue(&model, i)?;
                let got = induced.residue(i);
                for r in 0..2 * rho {
                    for c in 0..2 * rho {
                        let want = if r >= rho && c < rho {
                            expected.get(r - rho, c).clone()
                        } else {
                            Scalar::zero()
                        };
                        if got.get(r, c) != &want {
                            found = Some(format!("node {i}, entry ({r},{c})"));
                            break 'nodes;
                        }
                    }
                }
            }
            found
        }
    };

    let mu = p.mu();
    let gauss_manin_mismatch = match induce_via_embedding(k, &p.a) {
        Err(e) => Some(format!("curve matrix does not embed: {e}")),
        Ok(induced) => {
            let gm = gm_topological_connection(p)?;
            let mut found = None;
            'nodes: for i in 0..k {
                let got = induced.residue(i).map(Scalar::substitute_z_inv_by_lambda);
                let want = gm.residue(i);
                for r in 0..2 * mu {
                    for c in 0..2 * mu {
                        if got.get(r, c) != want.get(r, c) {
                            found = Some(format!("node {i}, entry ({r},{c})"));
                            break 'nodes;
                        }
                    }
                }
            }
            found
        }
    };

    Ok(GlueReport {
        orthogonality_mismatch,
        splitting_det,
        dubrovin_substitution: "y_i = v_i".into(),
        dubrovin_mismatch,
        gauss_manin_substitution: "y_i = w_i, z = 2π√−1".into(),
        gauss_manin_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::{complete_from_b, random_presentation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e)
    }

    #[test]
    fn trivial_connection_shape() {
        let c = trivial_log_connection(2);
        assert_eq!((c.base(), c.dim(), c.hyperplanes()), (2, 4, 2));
        for i in 0..2 {
            let r = c.residue(i);
            assert_eq!(r.get(2 + i, i), &Scalar::z_inv());
            // a matrix unit: exactly one entry
            let mut count = 0;
            for a in 0..4 {
                for b in 0..4 {
                    if !r.get(a, b).is_zero() {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, 1);
        }
    }

    #[test]
    fn trivial_connection_restricts_to_single_factor() {
        let big = trivial_log_connection(3);
        let one = trivial_log_connection(1);
        for i in 0..3 {
            // restrict residue i to the coordinates {i, 3+i}
            let r = big.residue(i);
            let idx = [i, 3 + i];
            for (a, &ra) in idx.iter().enumerate() {
                for (b, &rb) in idx.iter().enumerate() {
                    assert_eq!(r.get(ra, rb), one.residue(0).get(a, b));
                }
            }
        }
    }

    #[test]
    fn induced_residues_are_row_outer_products() {
        let b = m(2, 1, &[1, 1]);
        let c = induce_via_embedding(2, &b).unwrap();
        for i in 0..2 {
            assert_eq!(c.residue(i).get(1, 0), &Scalar::z_inv());
        }
        let a = m(2, 1, &[1, -1]);
        let c = induce_via_embedding(2, &a).unwrap();
        for i in 0..2 {
            // signs square away
            assert_eq!(c.residue(i).get(1, 0), &Scalar::z_inv());
        }
    }

    #[test]
    fn identity_embedding_recovers_trivial() {
        let k = 3;
        let c = induce_via_embedding(k, &IntMatrix::identity(k)).unwrap();
        let t = trivial_log_connection(k);
        assert_eq!(c.hyperplanes(), t.hyperplanes());
        for i in 0..k {
            assert_eq!(c.form(i), t.form(i));
            assert!(c.residue(i).sub(t.residue(i)).is_zero());
        }
    }

    #[test]
    fn induced_residues_square_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let p = random_presentation(&mut rng, 8);
            let c = induce_via_embedding(p.k, &p.b).unwrap();
            for i in 0..p.k {
                let r = c.residue(i);
                assert!(r.mul(r).is_zero(), "node {i} residue not nilpotent");
            }
        }
    }

    #[test]
    fn embedding_rejects_dependent_columns() {
        assert!(induce_via_embedding(2, &m(2, 2, &[1, 2, 1, 2])).is_err());
    }

    #[test]
    fn dedup_merges_proportional_forms() {
        let forms = vec![
            vec![BigInt::from(1), BigInt::from(-1)],
            vec![BigInt::from(-2), BigInt::from(2)],
        ];
        let mut r0 = ScalarMatrix::zeros(2, 2);
        r0.set(1, 0, Scalar::z_inv());
        let mut r1 = ScalarMatrix::zeros(2, 2);
        r1.set(1, 0, Scalar::z_inv());
        let c = LogConnection::new(2, 2, forms, vec![r0, r1]).unwrap();
        let d = c.deduplicated();
        assert_eq!(d.hyperplanes(), 1);
        assert_eq!(d.form(0), &[BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(
            d.residue(0).get(1, 0),
            &(&Scalar::z_inv() + &Scalar::z_inv())
        );
    }

    #[test]
    fn zero_form_needs_zero_residue() {
        let mut r = ScalarMatrix::zeros(2, 2);
        r.set(0, 0, Scalar::one());
        assert!(LogConnection::new(1, 2, vec![vec![BigInt::zero()]], vec![r]).is_err());
    }

    #[test]
    fn glue_two_node() {
        let p = TransitionPresentation::new(2, m(2, 1, &[1, -1]), m(2, 1, &[1, 1])).unwrap();
        let report = glue_check(&p).unwrap();
        assert!(report.dubrovin_glued(), "{report:?}");
        assert!(report.gauss_manin_glued(), "{report:?}");
        assert!(report.passed());
        assert_eq!(report.splitting_det.clone() * &report.splitting_det, BigInt::from(4));
        assert_eq!(report.dubrovin_substitution, "y_i = v_i");
    }

    #[test]
    fn glue_sixteen_node() {
        let b = IntMatrix::new(16, 1, vec![BigInt::from(1); 16]);
        let p = complete_from_b(16, b).unwrap();
        assert!(glue_check(&p).unwrap().passed());
    }

    #[test]
    fn tampered_orthogonality_is_located() {
        let p = TransitionPresentation::new(2, m(2, 1, &[1, -1]), m(2, 1, &[1, 2])).unwrap();
        let report = glue_check(&p).unwrap();
        assert_eq!(report.orthogonality_mismatch, Some((0, 0)));
        assert!(!report.dubrovin_glued());
    }

    #[test]
    fn glue_random_presentations() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let p = random_presentation(&mut rng, 10);
            let report = glue_check(&p).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }
}
