//! Conifold-transition presentations.
//!
//! A presentation is the combinatorial skeleton of a transition: k nodes, a
//! k×μ relation matrix A for the exceptional curves and a k×ρ relation
//! matrix B for the vanishing spheres. The exactness package is AᵗB = 0,
//! μ + ρ = k, and the mutual saturated-kernel identities (B spans ker Aᵗ,
//! A spans ker Bᵗ). Smoothability asks additionally that no row of A or of
//! B vanishes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::error::Error;
use crate::matrix::{
    column_hermite_form, columns_in_span, kernel_basis, rank, IntMatrix,
};

/// Symmetric 3-tensor of rationals on ρ indices: classical triple
/// intersection numbers (Tₗ.Tₘ.Tₙ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple3 {
    rho: usize,
    entries: Vec<BigRational>,
}

impl Triple3 {
    pub fn zero(rho: usize) -> Self {
        Triple3 { rho, entries: vec![BigRational::zero(); rho * rho * rho] }
    }

    pub fn new(rho: usize, entries: Vec<BigRational>) -> Result<Self, Error> {
        if entries.len() != rho * rho * rho {
            return Err(Error::Dimension(format!(
                "triple tensor needs {}^3 entries, got {}",
                rho,
                entries.len()
            )));
        }
        let t = Triple3 { rho, entries };
        if !t.is_symmetric() {
            return Err(Error::InvalidPresentation(
                "triple tensor is not symmetric under index permutations".into(),
            ));
        }
        Ok(t)
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn get(&self, l: usize, m: usize, n: usize) -> &BigRational {
        &self.entries[(l * self.rho + m) * self.rho + n]
    }

    pub fn set(&mut self, l: usize, m: usize, n: usize, v: BigRational) {
        self.entries[(l * self.rho + m) * self.rho + n] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        for l in 0..self.rho {
            for m in 0..self.rho {
                for n in 0..self.rho {
                    let e = self.get(l, m, n);
                    if e != self.get(l, n, m)
                        || e != self.get(m, l, n)
                        || e != self.get(n, m, l)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Betti-number bookkeeping for the two ends of a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub h3_x: u32,
    pub h3_y: u32,
    pub h2_x: u32,
    pub h2_y: u32,
}

#[derive(Clone, Debug)]
pub struct TransitionPresentation {
    pub k: usize,
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub triple: Option<Triple3>,
    pub hodge: Option<HodgeData>,
}

/// One named validation check; `detail` carries offending coordinates.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, passed: bool, detail: Option<String>) {
        self.checks.push(Check { name, passed, detail });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The exact-sequence package: dimensions, orthogonality, ranks, mutual
    /// saturated kernels, tensor symmetry.
    pub fn exactness_ok(&self) -> bool {
        self.checks.iter().filter(|c| c.name != "friedman" && c.name != "sty").all(|c| c.passed)
    }

    /// Both smoothability conditions (no zero row in A, none in B).
    pub fn smoothability_ok(&self) -> bool {
        ["friedman", "sty"].iter().all(|n| self.check(n).is_some_and(|c| c.passed))
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl TransitionPresentation {
    pub fn new(k: usize, a: IntMatrix, b: IntMatrix) -> Result<Self, Error> {
        if a.rows() != k || b.rows() != k {
            return Err(Error::Dimension(format!(
                "relation matrices need {k} rows, got {} and {}",
                a.rows(),
                b.rows()
            )));
        }
        Ok(TransitionPresentation { k, a, b, triple: None, hodge: None })
    }

    pub fn with_triple(mut self, triple: Triple3) -> Result<Self, Error> {
        if triple.rho() != self.rho() {
            return Err(Error::Dimension(format!(
                "triple tensor rank {} does not match ρ = {}",
                triple.rho(),
                self.rho()
            )));
        }
        self.triple = Some(triple);
        Ok(self)
    }

    pub fn with_hodge(mut self, hodge: HodgeData) -> Self {
        self.hodge = Some(hodge);
        self
    }

    /// Number of independent curve relations.
    pub fn mu(&self) -> usize {
        self.a.cols()
    }

    /// Number of independent sphere relations.
    pub fn rho(&self) -> usize {
        self.b.cols()
    }

    /// Runs every structural and smoothability check, reporting each by name.
    pub fn validate(&self) -> Result<ValidationReport, Error> {
        if self.a.rows() != self.k || self.b.rows() != self.k {
            return Err(Error::Dimension(format!(
                "relation matrices need {} rows, got {} and {}",
                self.k,
                self.a.rows(),
                self.b.rows()
            )));
        }
        let mut report = ValidationReport { checks: Vec::new() };
        let (mu, rho) = (self.mu(), self.rho());

        report.push(
            "dimension-count",
            mu + rho == self.k,
            (mu + rho != self.k).then(|| format!("μ + ρ = {} but k = {}", mu + rho, self.k)),
        );

        let prod = self.a.transpose().mul(&self.b);
        let mismatch = (0..mu)
            .flat_map(|j| (0..rho).map(move |l| (j, l)))
            .find(|&(j, l)| !prod.get(j, l).is_zero());
        report.push(
            "orthogonality",
            mismatch.is_none(),
            mismatch.map(|(j, l)| format!("(AᵗB)[{j}][{l}] = {}", prod.get(j, l))),
        );

        report.push("rank-of-a", rank(&self.a) == mu, None);
        report.push("rank-of-b", rank(&self.b) == rho, None);

        let ker_at = kernel_basis(&self.a.transpose());
        let b_spans = columns_in_span(&self.b, &ker_at) && columns_in_span(&ker_at, &self.b);
        report.push("spheres-span-curve-kernel", b_spans, None);

        let ker_bt = kernel_basis(&self.b.transpose());
        let a_spans = columns_in_span(&self.a, &ker_bt) && columns_in_span(&ker_bt, &self.a);
        report.push("curves-span-sphere-kernel", a_spans, None);

        let triple_ok = self.triple.as_ref().map_or(true, |t| {
            t.rho() == rho && t.is_symmetric()
        });
        report.push("triple-symmetry", triple_ok, None);

        let a_zero_row = (0..self.k).find(|&i| self.a.row_is_zero(i));
        report.push(
            "friedman",
            a_zero_row.is_none(),
            a_zero_row.map(|i| format!("row {i} of A is zero")),
        );
        let b_zero_row = (0..self.k).find(|&i| self.b.row_is_zero(i));
        report.push(
            "sty",
            b_zero_row.is_none(),
            b_zero_row.map(|i| format!("row {i} of B is zero")),
        );

        Ok(report)
    }
}

/// Completes a presentation from the curve relation matrix: B spans the
/// saturated kernel of Aᵗ, and A is then replaced by the saturated kernel
/// of Bᵗ. The second step saturates the span of A (it changes nothing when
/// the input span is already saturated) and is what makes the mutual-kernel
/// checks of `validate` hold unconditionally. Zero rows are never created:
/// row i of the saturation is zero exactly when row i of the input is.
/// Both matrices are put in column Hermite form so the output is
/// reproducible.
pub fn complete_from_a(k: usize, a: IntMatrix) -> Result<TransitionPresentation, Error> {
    if a.rows() != k {
        return Err(Error::Dimension(format!("A needs {k} rows, got {}", a.rows())));
    }
    if rank(&a) != a.cols() {
        return Err(Error::InvalidPresentation(
            "columns of A are dependent; drop redundant relations first".into(),
        ));
    }
    let b = column_hermite_form(&kernel_basis(&a.transpose()));
    let a = column_hermite_form(&kernel_basis(&b.transpose()));
    TransitionPresentation::new(k, a, b)
}

/// Mirror of `complete_from_a` with the sphere matrix given.
pub fn complete_from_b(k: usize, b: IntMatrix) -> Result<TransitionPresentation, Error> {
    if b.rows() != k {
        return Err(Error::Dimension(format!("B needs {k} rows, got {}", b.rows())));
    }
    if rank(&b) != b.cols() {
        return Err(Error::InvalidPresentation(
            "columns of B are dependent; drop redundant relations first".into(),
        ));
    }
    let a = column_hermite_form(&kernel_basis(&b.transpose()));
    let b = column_hermite_form(&kernel_basis(&a.transpose()));
    TransitionPresentation::new(k, a, b)
}

#[derive(Clone, Debug)]
pub struct EulerReport {
    pub mu: usize,
    pub rho: usize,
    /// 2μ = h³(X) − h³(Y)
    pub mu_consistent: bool,
    /// ρ = h²(Y) − h²(X)
    pub rho_consistent: bool,
}

impl EulerReport {
    pub fn consistent(&self) -> bool {
        self.mu_consistent && self.rho_consistent
    }
}

/// Checks the column counts of A and B against the Betti-number differences.
pub fn euler_check(p: &TransitionPresentation) -> Result<EulerReport, Error> {
    let hodge = p.hodge.as_ref().ok_or_else(|| {
        Error::InvalidPresentation("hodge data missing; euler check needs it".into())
    })?;
    let (mu, rho) = (p.mu(), p.rho());
    let mu_consistent =
        i64::from(hodge.h3_x) - i64::from(hodge.h3_y) == 2 * mu as i64;
    let rho_consistent = i64::from(hodge.h2_y) - i64::from(hodge.h2_x) == rho as i64;
    Ok(EulerReport { mu, rho, mu_consistent, rho_consistent })
}

/// Random presentation with 2 ≤ k ≤ max_k, generated by completing a random
/// full-rank A with no zero row. The exactness checks always pass on the
/// result; the sphere-side smoothability condition may not.
pub fn random_presentation(rng: &mut impl Rng, max_k: usize) -> TransitionPresentation {
    assert!(max_k >= 2, "need at least two nodes");
    loop {
        let k = rng.gen_range(2..=max_k);
        let mu = rng.gen_range(1..k);
        let mut a = IntMatrix::zeros(k, mu);
        for i in 0..k {
            for j in 0..mu {
                a.set(i, j, BigInt::from(rng.gen_range(-3i64..=3)));
            }
            if a.row_is_zero(i) {
                let j = rng.gen_range(0..mu);
                let v = if rng.gen() { 1 } else { -1 } * rng.gen_range(1i64..=3);
                a.set(i, j, BigInt::from(v));
            }
        }
        if rank(&a) != mu {
            continue;
        }
        return complete_from_a(k, a).expect("full-rank A with k rows always completes");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e)
    }

    fn two_node() -> TransitionPresentation {
        TransitionPresentation::new(2, m(2, 1, &[1, -1]), m(2, 1, &[1, 1])).unwrap()
    }

    #[test]
    fn two_node_passes_everything() {
        let report = two_node().validate().unwrap();
        assert!(report.all_ok(), "{report:?}");
    }

    #[test]
    fn sixteen_node_single_sphere_relation() {
        let b = IntMatrix::new(16, 1, vec![BigInt::from(1); 16]);
        let p = complete_from_b(16, b).unwrap();
        assert_eq!(p.mu(), 15);
        assert_eq!(p.rho(), 1);
        assert_eq!(rank(&p.a), 15);
        assert!(p.a.transpose().mul(&p.b).is_zero());
        let report = p.validate().unwrap();
        assert!(report.exactness_ok(), "{report:?}");
    }

    #[test]
    fn orthogonal_but_not_smoothable() {
        let p = TransitionPresentation::new(2, m(2, 1, &[1, 0]), m(2, 1, &[0, 1])).unwrap();
        let report = p.validate().unwrap();
        assert!(report.check("orthogonality").unwrap().passed);
        assert!(!report.check("friedman").unwrap().passed);
        assert!(!report.all_ok());
    }

    #[test]
    fn orthogonality_failure_is_located() {
        let p = TransitionPresentation::new(2, m(2, 1, &[1, -1]), m(2, 1, &[1, 2])).unwrap();
        let report = p.validate().unwrap();
        let check = report.check("orthogonality").unwrap();
        assert!(!check.passed);
        assert!(check.detail.as_deref().unwrap().contains("[0][0]"));
    }

    #[test]
    fn complete_from_a_examples() {
        let p = complete_from_a(2, m(2, 1, &[1, -1])).unwrap();
        assert_eq!(p.b, m(2, 1, &[1, 1]));

        let p = complete_from_a(3, m(3, 2, &[1, 0, 0, 1, -1, -1])).unwrap();
        assert_eq!(p.b, m(3, 1, &[1, 1, 1]));

        let p = complete_from_a(1, IntMatrix::zeros(1, 0)).unwrap();
        assert_eq!(p.b, IntMatrix::identity(1));
    }

    #[test]
    fn complete_from_b_examples() {
        let p = complete_from_b(2, m(2, 1, &[1, 1])).unwrap();
        assert!(columns_in_span(&p.a, &m(2, 1, &[1, -1])));
        assert!(columns_in_span(&m(2, 1, &[1, -1]), &p.a));

        let p = complete_from_b(3, IntMatrix::identity(3)).unwrap();
        assert_eq!(p.a.cols(), 0);
    }

    #[test]
    fn completion_rejects_dependent_columns() {
        assert!(complete_from_a(2, m(2, 2, &[1, 2, 1, 2])).is_err());
    }

    #[test]
    fn completion_round_trip_preserves_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let p = random_presentation(&mut rng, 9);
            let q = complete_from_b(p.k, p.b.clone()).unwrap();
            assert!(columns_in_span(&q.a, &p.a), "recompleted A span grew");
            assert!(columns_in_span(&p.a, &q.a), "recompleted A span shrank");
        }
    }

    #[test]
    fn random_presentations_pass_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_presentation(&mut rng, 12);
            let report = p.validate().unwrap();
            assert!(report.exactness_ok(), "{report:?}");
            assert!(report.check("friedman").unwrap().passed);
            // full rank of [A | B]
            let s = p.a.hstack(&p.b);
            assert_ne!(s.det(), BigInt::zero());
        }
    }

    #[test]
    fn euler_examples() {
        let p = two_node().with_hodge(HodgeData { h3_x: 4, h3_y: 2, h2_x: 1, h2_y: 2 });
        let report = euler_check(&p).unwrap();
        assert!(report.consistent());
        assert_eq!((report.mu, report.rho), (1, 1));

        assert!(euler_check(&two_node()).is_err());

        let degenerate =
            TransitionPresentation::new(0, IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0))
                .unwrap()
                .with_hodge(HodgeData { h3_x: 6, h3_y: 6, h2_x: 2, h2_y: 2 });
        assert!(euler_check(&degenerate).unwrap().consistent());
    }

    #[test]
    fn triple_symmetry_enforced() {
        let mut entries = vec![BigRational::zero(); 8];
        entries[1] = BigRational::from(BigInt::from(5)); // (0,0,1) without mates
        assert!(Triple3::new(2, entries).is_err());

        let mut t = Triple3::zero(1);
        t.set(0, 0, 0, BigRational::from(BigInt::from(6)));
        let p = two_node().with_triple(t).unwrap();
        assert!(p.validate().unwrap().check("triple-symmetry").unwrap().passed);
    }
}
