//! Degeneration-side machinery: symplectic bases of the middle homology,
//! Picard–Lefschetz monodromy around the discriminant, the expansion of the
//! holomorphic volume form near the conifold point, and the flat structure
//! carried by a weight-two prepotential.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::Error;
use crate::gluing::LogConnection;
use crate::logseries::LogSeries;
use crate::matrix::{
    inverse_unimodular, kernel_basis, rank, smith_normal_form, solve_integer, IntMatrix,
};
use crate::scalar::{Scalar, ScalarMatrix};
use crate::transition::TransitionPresentation;

fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn scaled(v: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x * c).collect()
}

fn add_into(acc: &mut [BigInt], v: &[BigInt]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

/// A rank-2(h+1) lattice with a skew pairing and a chosen basis
/// (α_0, …, α_h, β_0, …, β_h) whose Gram matrix is the standard
/// symplectic form: (α_p.β_l) = δ_pl, all other pairings zero.
/// The first `mu` of α_1, …, α_h span the distinguished isotropic
/// subspace the basis was grown from.
#[derive(Clone)]
pub struct SymplecticLattice {
    n: usize,
    mu: usize,
    pairing: IntMatrix,
    alphas: Vec<Vec<BigInt>>,
    betas: Vec<Vec<BigInt>>,
}

/// The block form [[0, I], [−I, 0]] on Z^{2n}.
pub fn standard_form(n: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, BigInt::one());
        j.set(n + i, i, -BigInt::one());
    }
    j
}

impl SymplecticLattice {
    /// The coordinate lattice Z^{2(mu+1)} with α_p = e_p, β_p = e_{n+p}.
    pub fn standard(mu: usize) -> Self {
        let n = mu + 1;
        let alphas = (0..n).map(|p| unit_vector(2 * n, p)).collect();
        let betas = (0..n).map(|p| unit_vector(2 * n, n + p)).collect();
        SymplecticLattice { n, mu, pairing: standard_form(n), alphas, betas }
    }

    pub fn h(&self) -> usize {
        self.n - 1
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn rank(&self) -> usize {
        2 * self.n
    }

    pub fn alpha(&self, p: usize) -> &[BigInt] {
        &self.alphas[p]
    }

    pub fn beta(&self, p: usize) -> &[BigInt] {
        &self.betas[p]
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        dot(x, &self.pairing.apply(y))
    }

    /// Gram matrix of (α_0, …, α_h, β_0, …, β_h).
    pub fn gram(&self) -> IntMatrix {
        let basis: Vec<&Vec<BigInt>> = self.alphas.iter().chain(&self.betas).collect();
        let mut g = IntMatrix::zeros(2 * self.n, 2 * self.n);
        for (r, x) in basis.iter().enumerate() {
            for (c, y) in basis.iter().enumerate() {
                g.set(r, c, self.pair(x, y));
            }
        }
        g
    }
}

fn unit_vector(len: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[i] = BigInt::one();
    v
}

/// Grows a full symplectic basis around a given isotropic set. The given
/// vectors become α_1, …, α_mu (a maximal set of h+1 vectors also fills
/// α_0); the remaining α slots are filled greedily with kernel vectors of
/// the accumulated pairing conditions, α_0 last, always taking the first
/// candidate independent of what was already chosen. Each β_l starts from
/// an integral solution of (α_p.δ) = δ_pl and is corrected by α's until
/// isotropic. Fails when the pairing is not skew or not unimodular enough
/// to admit an integral dual basis.
pub fn build_symplectic_basis(
    pairing: &IntMatrix,
    v_basis: &[Vec<BigInt>],
) -> Result<SymplecticLattice, Error> {
    let dim = pairing.rows();
    if pairing.cols() != dim || dim == 0 || dim % 2 != 0 {
        return Err(Error::Dimension(format!(
            "pairing must be square of even positive rank, got {dim}×{}",
            pairing.cols()
        )));
    }
    let n = dim / 2;
    for r in 0..dim {
        for c in 0..dim {
            if pairing.get(r, c) != &-pairing.get(c, r).clone() {
                return Err(Error::InvalidPresentation("pairing is not skew".into()));
            }
        }
    }
    if pairing.det().is_zero() {
        return Err(Error::InvalidPresentation("pairing is degenerate".into()));
    }
    let mu = v_basis.len();
    if mu > n {
        return Err(Error::Dimension(format!(
            "{mu} isotropic vectors cannot fit in {n} alpha slots"
        )));
    }
    for v in v_basis {
        if v.len() != dim {
            return Err(Error::Dimension(format!("vector length {} in rank {dim}", v.len())));
        }
    }
    for (i, x) in v_basis.iter().enumerate() {
        for y in &v_basis[i..] {
            if !dot(x, &pairing.apply(y)).is_zero() {
                return Err(Error::InvalidPresentation("given vectors are not isotropic".into()));
            }
        }
    }
    let mut w: Vec<Vec<BigInt>> = v_basis.to_vec();
    if !w.is_empty() && rank(&IntMatrix::from_rows(w.clone())) != w.len() {
        return Err(Error::InvalidPresentation("given vectors are dependent".into()));
    }
    let jt = pairing.transpose();
    while w.len() < n {
        // one zero row encodes the empty condition set
        let conditions = if w.is_empty() {
            IntMatrix::zeros(1, dim)
        } else {
            IntMatrix::from_rows(w.iter().map(|v| jt.apply(v)).collect())
        };
        let kernel = kernel_basis(&conditions);
        let next = if w.is_empty() {
            kernel.col(0)
        } else {
            // The new vector must keep the span a direct summand, or no
            // integral dual basis can exist later. Writing the current
            // vectors in kernel coordinates, a Smith decomposition both
            // verifies saturation and hands over a complement vector.
            let not_saturated =
                || Error::NoSolution("given vectors do not span a saturated sublattice".into());
            let mut coords = IntMatrix::zeros(kernel.cols(), w.len());
            for (c, v) in w.iter().enumerate() {
                let x = solve_integer(&kernel, v).ok_or_else(not_saturated)?;
                for (r, entry) in x.into_iter().enumerate() {
                    coords.set(r, c, entry);
                }
            }
            let snf = smith_normal_form(&coords);
            if (0..w.len()).any(|t| snf.d.get(t, t) != &BigInt::one()) {
                return Err(not_saturated());
            }
            let u_inv = inverse_unimodular(&snf.u)?;
            kernel.apply(&u_inv.col(w.len()))
        };
        w.push(next);
    }
    let mut alphas = vec![Vec::new(); n];
    let slot_order: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
    for (t, v) in w.into_iter().enumerate() {
        alphas[slot_order[t]] = v;
    }
    let conditions = IntMatrix::from_rows(alphas.iter().map(|a| jt.apply(a)).collect());
    let mut betas: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for l in 0..n {
        let rhs = unit_vector(n, l);
        let delta = solve_integer(&conditions, &rhs).ok_or_else(|| {
            Error::NoSolution(format!("no integral dual vector for alpha slot {l}"))
        })?;
        let mut beta = delta.clone();
        for (p, prev) in betas.iter().enumerate() {
            let c = dot(&delta, &pairing.apply(prev));
            let correction = scaled(&alphas[p], &-c);
            add_into(&mut beta, &correction);
        }
        betas.push(beta);
    }
    Ok(SymplecticLattice { n, mu, pairing: pairing.clone(), alphas, betas })
}

/// The vanishing sphere classes of a presentation inside a symplectic
/// lattice: [S_i] = −Σ_j a_ij α_j (the j-th column of A pairs with the
/// isotropic slot α_j, 1-based), together with their Poincaré duals as
/// functionals. Sphere classes are pairwise orthogonal.
pub struct SphereSystem {
    k: usize,
    cycles: Vec<Vec<BigInt>>,
    pd: Vec<Vec<BigInt>>,
}

impl SphereSystem {
    pub fn new(lattice: &SymplecticLattice, a: &IntMatrix) -> Result<Self, Error> {
        if a.cols() > lattice.mu() {
            return Err(Error::Dimension(format!(
                "{} relation columns but only {} isotropic slots",
                a.cols(),
                lattice.mu()
            )));
        }
        let k = a.rows();
        let dim = lattice.rank();
        let mut cycles = Vec::with_capacity(k);
        for i in 0..k {
            let mut cycle = vec![BigInt::zero(); dim];
            for j in 0..a.cols() {
                let part = scaled(lattice.alpha(j + 1), &-a.get(i, j).clone());
                add_into(&mut cycle, &part);
            }
            cycles.push(cycle);
        }
        for (i, x) in cycles.iter().enumerate() {
            for y in &cycles[i..] {
                if !lattice.pair(x, y).is_zero() {
                    return Err(Error::InvalidPresentation(
                        "sphere classes are not orthogonal".into(),
                    ));
                }
            }
        }
        let jt = lattice.pairing.transpose();
        let pd = cycles.iter().map(|c| jt.apply(c)).collect();
        Ok(SphereSystem { k, cycles, pd })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cycle(&self, i: usize) -> &[BigInt] {
        &self.cycles[i]
    }

    pub fn dual(&self, i: usize) -> &[BigInt] {
        &self.pd[i]
    }
}

/// Monodromy action on a cocycle σ (in dual coordinates):
/// Tσ = σ + Σ_i σ([S_i])·PD([S_i]).
pub fn picard_lefschetz(
    lattice: &SymplecticLattice,
    spheres: &SphereSystem,
    sigma: &[BigInt],
) -> Vec<BigInt> {
    assert_eq!(sigma.len(), lattice.rank(), "cocycle length mismatch");
    let mut out = sigma.to_vec();
    for i in 0..spheres.k() {
        add_into(&mut out, &pl_single(lattice, spheres, i, sigma));
    }
    out
}

/// The contribution of a single node: σ([S_i])·PD([S_i]).
pub fn pl_single(
    lattice: &SymplecticLattice,
    spheres: &SphereSystem,
    i: usize,
    sigma: &[BigInt],
) -> Vec<BigInt> {
    assert_eq!(sigma.len(), lattice.rank(), "cocycle length mismatch");
    let value = dot(sigma, spheres.cycle(i));
    scaled(spheres.dual(i), &value)
}

/// The nilpotent part N = T − I as a matrix on dual coordinates.
pub fn pl_nilpotent(lattice: &SymplecticLattice, spheres: &SphereSystem) -> IntMatrix {
    let dim = lattice.rank();
    let mut n = IntMatrix::zeros(dim, dim);
    for i in 0..spheres.k() {
        for r in 0..dim {
            for c in 0..dim {
                let add = &spheres.dual(i)[r] * &spheres.cycle(i)[c];
                if !add.is_zero() {
                    let cur = n.get(r, c).clone();
                    n.set(r, c, cur + add);
                }
            }
        }
    }
    n
}

/// The full monodromy matrix T = I + N.
pub fn pl_operator(lattice: &SymplecticLattice, spheres: &SphereSystem) -> IntMatrix {
    let dim = lattice.rank();
    let mut t = pl_nilpotent(lattice, spheres);
    for r in 0..dim {
        let cur = t.get(r, r).clone();
        t.set(r, r, cur + BigInt::one());
    }
    t
}

/// The pairing matrix of the monodromy around the l-th discriminant branch,
/// computed through the sphere machinery: entry (j, p) is the β_{p+1}-period
/// of N(l)·α_{j+1}*, where N(l) collects the nodes with a_il ≠ 0.
pub fn monodromy_pairing(p: &TransitionPresentation, l: usize) -> Result<IntMatrix, Error> {
    let mu = p.mu();
    if l >= mu {
        return Err(Error::Dimension(format!("branch index {l} out of range (μ = {mu})")));
    }
    let lattice = SymplecticLattice::standard(mu);
    let spheres = SphereSystem::new(&lattice, &p.a)?;
    let n = mu + 1;
    let mut out = IntMatrix::zeros(mu, mu);
    for j in 0..mu {
        let sigma = unit_vector(2 * n, j + 1);
        let mut image = vec![BigInt::zero(); 2 * n];
        for i in 0..p.k {
            if !p.a.get(i, l).is_zero() {
                add_into(&mut image, &pl_single(&lattice, &spheres, i, &sigma));
            }
        }
        for q in 0..mu {
            out.set(j, q, image[n + 1 + q].clone());
        }
    }
    Ok(out)
}

/// Leading data for the volume-form expansion: the constant a_0 and
/// holomorphic jets for the α_0 period and each β period. The default has
/// a_0 = 1 and all jets zero, the normalization in which the α_0 period
/// restricts to 1 on the boundary.
pub struct OmegaJets {
    pub a0: Scalar,
    pub alpha0_jet: LogSeries,
    pub beta_jets: Vec<LogSeries>,
}

impl OmegaJets {
    pub fn default_for(mu: usize) -> Self {
        OmegaJets {
            a0: Scalar::one(),
            alpha0_jet: LogSeries::zero(mu),
            beta_jets: vec![LogSeries::zero(mu); mu + 1],
        }
    }
}

/// Period components of the volume form in the symplectic basis: entry p
/// of `beta` is the integral over β_p (the coefficient on β_p* in Ω), and
/// likewise for `alpha`. Base coordinates are r_1, …, r_mu.
pub struct OmegaExpansion {
    mu: usize,
    alpha: Vec<LogSeries>,
    beta: Vec<LogSeries>,
}

impl OmegaExpansion {
    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn alpha_period(&self, l: usize) -> &LogSeries {
        &self.alpha[l]
    }

    pub fn beta_period(&self, p: usize) -> &LogSeries {
        &self.beta[p]
    }

    /// Value of the α_0 period at the conifold point.
    pub fn boundary_value(&self) -> Result<Scalar, Error> {
        self.alpha[0].boundary_value()
    }
}

/// Expands Ω = a_0·α_0* + Σ_j r_j·α_j* + λ·Σ_i w_i log(w_i)·Σ_p a_ip β_p*
/// + jets, with w_i = Σ_j a_ij r_j. The α_j period is exactly r_j; the
/// log terms land in the β periods, node i contributing only where its
/// curve relation row is nonzero. Degenerate zero rows contribute nothing.
pub fn omega_expansion(
    p: &TransitionPresentation,
    jets: &OmegaJets,
) -> Result<OmegaExpansion, Error> {
    let mu = p.mu();
    if jets.beta_jets.len() != mu + 1 {
        return Err(Error::Dimension(format!(
            "need {} beta jets, got {}",
            mu + 1,
            jets.beta_jets.len()
        )));
    }
    for jet in jets.beta_jets.iter().chain(std::iter::once(&jets.alpha0_jet)) {
        if jet.vars() != mu {
            return Err(Error::Dimension(format!(
                "jet over {} variables, base has {mu}",
                jet.vars()
            )));
        }
        if !jet.is_holomorphic() {
            return Err(Error::InvalidPresentation("jets must be holomorphic".into()));
        }
    }
    let mut alpha = Vec::with_capacity(mu + 1);
    let mut lead = LogSeries::constant(mu, jets.a0.clone());
    lead = lead.add(&jets.alpha0_jet);
    alpha.push(lead);
    for j in 0..mu {
        let mut s = LogSeries::zero(mu);
        let mut mono = vec![0u32; mu];
        mono[j] = 1;
        s.add_poly(mono, Scalar::one());
        alpha.push(s);
    }
    let mut beta = Vec::with_capacity(mu + 1);
    beta.push(jets.beta_jets[0].clone());
    for slot in 1..=mu {
        let mut s = jets.beta_jets[slot].clone();
        for i in 0..p.k {
            let row = p.a.row(i);
            if row.iter().all(BigInt::is_zero) {
                continue;
            }
            let a_ip = p.a.get(i, slot - 1);
            if a_ip.is_zero() {
                continue;
            }
            for j in 0..mu {
                let c = BigRational::from(a_ip * p.a.get(i, j));
                if c.is_zero() {
                    continue;
                }
                let mut mono = vec![0u32; mu];
                mono[j] = 1;
                s.add_log(&row, mono, Scalar::lambda().mul_rational(&c));
            }
        }
        beta.push(s);
    }
    Ok(OmegaExpansion { mu, alpha, beta })
}

/// The pole part of the triple coupling: Σ_i λ·a_ip·a_im·a_in / w_i,
/// assembled directly from the relation matrix.
pub fn yukawa_principal(
    pres: &TransitionPresentation,
    p: usize,
    m: usize,
    n: usize,
) -> Result<LogSeries, Error> {
    let mu = pres.mu();
    for idx in [p, m, n] {
        if idx >= mu {
            return Err(Error::Dimension(format!("index {idx} out of range (μ = {mu})")));
        }
    }
    let mut out = LogSeries::zero(mu);
    for i in 0..pres.k {
        let c = pres.a.get(i, p) * pres.a.get(i, m) * pres.a.get(i, n);
        if c.is_zero() {
            continue;
        }
        let coeff = Scalar::lambda().mul_rational(&BigRational::from(c));
        out.add_fraction(&pres.a.row(i), 1, vec![0; mu], coeff)?;
    }
    Ok(out)
}

/// The same coupling read off the period expansion: two derivatives of a
/// β period. With holomorphic jets the two routes agree up to holomorphic
/// terms; with zero jets they agree exactly.
pub fn yukawa_from_periods(
    expansion: &OmegaExpansion,
    p: usize,
    m: usize,
    n: usize,
) -> Result<LogSeries, Error> {
    let mu = expansion.mu();
    for idx in [p, m, n] {
        if idx >= mu {
            return Err(Error::Dimension(format!("index {idx} out of range (μ = {mu})")));
        }
    }
    Ok(expansion.beta_period(p + 1).derivative(m).derivative(n))
}

/// The topological part of the Gauss–Manin connection on the 2μ-dimensional
/// frame (v_1, …, v_μ, v^1, …, v^μ): along each nonzero curve relation row
/// the residue is λ times the outer product of the row with itself, mapping
/// the primal frame into the dual one.
pub fn gm_topological_connection(p: &TransitionPresentation) -> Result<LogConnection, Error> {
    let mu = p.mu();
    let mut forms = Vec::with_capacity(p.k);
    let mut residues = Vec::with_capacity(p.k);
    for i in 0..p.k {
        let row = p.a.row(i);
        let mut r = ScalarMatrix::zeros(2 * mu, 2 * mu);
        for n in 0..mu {
            for m in 0..mu {
                let c = BigRational::from(&row[n] * &row[m]);
                if !c.is_zero() {
                    r.set(mu + n, m, Scalar::lambda().mul_rational(&c));
                }
            }
        }
        forms.push(row);
        residues.push(r);
    }
    LogConnection::new(mu, 2 * mu, forms, residues)
}

/// Applies the topological connection in direction ∂_p to the primal frame
/// vector v_m, returning the coefficients on v^1, …, v^μ. Each hyperplane
/// w_i contributes residue·(∂_p w_i)/w_i.
pub fn gm_apply(
    pres: &TransitionPresentation,
    p: usize,
    m: usize,
) -> Result<Vec<LogSeries>, Error> {
    let mu = pres.mu();
    for idx in [p, m] {
        if idx >= mu {
            return Err(Error::Dimension(format!("index {idx} out of range (μ = {mu})")));
        }
    }
    let connection = gm_topological_connection(pres)?;
    let mut out = vec![LogSeries::zero(mu); mu];
    for i in 0..connection.hyperplanes() {
        let form = connection.form(i).to_vec();
        if form.iter().all(BigInt::is_zero) {
            continue;
        }
        let dp = BigRational::from(form[p].clone());
        if dp.is_zero() {
            continue;
        }
        for (n, acc) in out.iter_mut().enumerate() {
            let entry = connection.residue(i).get(mu + n, m);
            if entry.is_zero() {
                continue;
            }
            acc.add_fraction(&form, 1, vec![0; mu], entry.mul_rational(&dp))?;
        }
    }
    Ok(out)
}

/// Integer-exponent polynomial in x_0, …, x_h with rational coefficients;
/// only x_0 may appear with negative exponents.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        let mut p = LaurentPoly::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: BigRational) {
        assert_eq!(exp.len(), self.vars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coefficient(&self, exp: &[i64]) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = LaurentPoly::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn derivative(&self, p: usize) -> Self {
        assert!(p < self.vars, "variable index out of range");
        let mut out = LaurentPoly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[p] == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[p] -= 1;
            out.add_term(exp, c * BigRational::from(BigInt::from(e[p])));
        }
        out
    }
}

impl std::fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p != 0)
                    .map(|(v, &p)| if p == 1 { format!("x{v}") } else { format!("x{v}^{p}") })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}·{}", mono.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A prepotential homogeneous of weight two: every term x^e has Σ e_p = 2,
/// with x_0 the only variable allowed negative exponents. The numerator
/// degree in x_1, …, x_h is recorded as the degree bound.
pub struct Prepotential {
    h: usize,
    poly: LaurentPoly,
    degree_bound: u32,
}

impl Prepotential {
    pub fn new(h: usize, terms: Vec<(Vec<i64>, BigRational)>) -> Result<Self, Error> {
        let vars = h + 1;
        let mut poly = LaurentPoly::zero(vars);
        let mut degree_bound = 0u32;
        for (exp, c) in terms {
            if exp.len() != vars {
                return Err(Error::Dimension(format!(
                    "exponent over {} variables, chart has {vars}",
                    exp.len()
                )));
            }
            if exp[1..].iter().any(|&e| e < 0) {
                return Err(Error::InvalidPresentation(
                    "only x_0 may carry negative exponents".into(),
                ));
            }
            if exp.iter().sum::<i64>() != 2 {
                return Err(Error::InvalidPresentation(format!(
                    "term {exp:?} is not of weight two"
                )));
            }
            let numerator: i64 = exp[1..].iter().sum();
            degree_bound = degree_bound.max(numerator as u32);
            poly.add_term(exp, c);
        }
        Ok(Prepotential { h, poly, degree_bound })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn third_derivative(&self, p: usize, j: usize, m: usize) -> LaurentPoly {
        self.poly.derivative(p).derivative(j).derivative(m)
    }
}

/// Flat frame data in the chart x_0 ≠ 0: for each direction p = 1, …, h a
/// connection matrix Θ_p on the frame (τ_0, τ_1, …, τ_h, τ^1, …, τ^h, τ^0),
/// row-major with that ordering.
pub struct BgConnection {
    h: usize,
    theta: Vec<Vec<LaurentPoly>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub curvature_zero: bool,
    pub euler_ok: bool,
}

impl FlatnessReport {
    pub fn ok(&self) -> bool {
        self.curvature_zero && self.euler_ok
    }
}

impl BgConnection {
    pub fn h(&self) -> usize {
        self.h
    }

    fn dim(&self) -> usize {
        2 * self.h + 2
    }

    /// Connection matrix in direction p (1-based chart direction).
    pub fn theta(&self, p: usize) -> &[LaurentPoly] {
        assert!((1..=self.h).contains(&p), "direction out of range");
        &self.theta[p - 1]
    }

    /// R_pq = ∂_p Θ_q − ∂_q Θ_p + Θ_p Θ_q − Θ_q Θ_p, entrywise.
    pub fn curvature(&self, p: usize, q: usize) -> Vec<LaurentPoly> {
        let d = self.dim();
        let tp = self.theta(p);
        let tq = self.theta(q);
        let mut out = vec![LaurentPoly::zero(self.h + 1); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut entry = tq[r * d + c].derivative(p).sub(&tp[r * d + c].derivative(q));
                for s in 0..d {
                    entry = entry.add(&tp[r * d + s].mul(&tq[s * d + c]));
                    entry = entry.sub(&tq[r * d + s].mul(&tp[s * d + c]));
                }
                out[r * d + c] = entry;
            }
        }
        out
    }
}

/// Builds the graded connection of a weight-two prepotential and checks it:
/// Θ_p sends τ_0 ↦ τ_p, τ_j ↦ Σ_m u_pjm τ^m + u_pj0 τ^0, τ^j ↦ δ_pj τ^0,
/// τ^0 ↦ 0. The report carries the literal curvature computation and the
/// Euler identity Σ_{m=0}^{h} x_m·u_pjm = 0 over all p, j including 0.
pub fn bryant_griffiths_connection(u: &Prepotential) -> (BgConnection, FlatnessReport) {
    let h = u.h();
    let vars = h + 1;
    let d = 2 * h + 2;
    let mut theta = Vec::with_capacity(h);
    for p in 1..=h {
        let mut m = vec![LaurentPoly::zero(vars); d * d];
        m[p * d] = LaurentPoly::constant(vars, BigRational::one());
        for j in 1..=h {
            for t in 1..=h {
                m[(h + t) * d + j] = u.third_derivative(p, j, t);
            }
            m[(d - 1) * d + j] = u.third_derivative(p, j, 0);
        }
        m[(d - 1) * d + h + p] = LaurentPoly::constant(vars, BigRational::one());
        theta.push(m);
    }
    let connection = BgConnection { h, theta };
    let mut curvature_zero = true;
    for p in 1..=h {
        for q in (p + 1)..=h {
            if connection.curvature(p, q).iter().any(|e| !e.is_zero()) {
                curvature_zero = false;
            }
        }
    }
    let mut euler_ok = true;
    for p in 0..vars {
        for j in 0..vars {
            let mut sum = LaurentPoly::zero(vars);
            for m in 0..vars {
                let mut x_m = vec![0i64; vars];
                x_m[m] = 1;
                let mut factor = LaurentPoly::zero(vars);
                factor.add_term(x_m, BigRational::one());
                sum = sum.add(&factor.mul(&u.third_derivative(p, j, m)));
            }
            if !sum.is_zero() {
                euler_ok = false;
            }
        }
    }
    (connection, FlatnessReport { curvature_zero, euler_ok })
}

/// Recovers the prepotential value from period data: u = ½·Σ_p x_p·u_p,
/// the Euler relation integrated once.
pub fn prepotential_from_periods(
    x: &[BigRational],
    gradients: &[BigRational],
) -> Result<BigRational, Error> {
    if x.len() != gradients.len() {
        return Err(Error::Dimension(format!(
            "{} coordinates against {} gradient entries",
            x.len(),
            gradients.len()
        )));
    }
    let sum: BigRational = x.iter().zip(gradients).map(|(a, b)| a * b).sum();
    Ok(sum / BigRational::from(BigInt::from(2)))
}
