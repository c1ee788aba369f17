//! Genus-0 A-model data of the small resolution side: multiple cover series,
//! structural coefficients, the Dubrovin connection with its logarithmic
//! residues, and the Novikov-quotient transport of prepotential coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::matrix::{rank, smith_normal_form, IntMatrix};
use crate::scalar::{Scalar, ScalarMatrix};
use crate::series::{Laurent1, TruncatedSeries};
use crate::transition::TransitionPresentation;

/// A presentation together with the truncation order used for all series
/// derived from it. Only shapes are checked here: several computations are
/// meaningful for degenerate matrices (zero rows, zero columns), so exactness
/// of the presentation is the caller's concern.
#[derive(Clone, Debug)]
pub struct ExtremalModel {
    pub presentation: TransitionPresentation,
    pub order: u32,
}

impl ExtremalModel {
    pub fn new(presentation: TransitionPresentation, order: u32) -> Self {
        ExtremalModel { presentation, order }
    }

    pub fn k(&self) -> usize {
        self.presentation.k
    }

    pub fn rho(&self) -> usize {
        self.presentation.rho()
    }

    /// v_i = Σ_p b_ip u^p, the pairing of node i's curve class with the
    /// direction variables.
    fn node_linear_form(&self, i: usize) -> Vec<BigInt> {
        (0..self.rho()).map(|p| self.presentation.b.get(i, p).clone()).collect()
    }
}

/// f(q) = q/(1−q) = Σ_{d≥1} q^d, truncated. One Novikov variable, no
/// direction variables.
pub fn f_series(order: u32) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(1, 0, order, 0);
    for d in 1..=order {
        s.add_term(vec![d], vec![], Scalar::one());
    }
    s
}

/// The genus-0 contribution of a single rigid rational curve C:
/// Σ_{d≥1} (1/d³)·q^{d[C]}·exp(d·w), with w standing for the pairing (C.t).
/// One Novikov variable, one direction variable.
pub fn multiple_cover_series(order: u32) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(1, 1, order, order);
    for d in 1..=order {
        let cover = BigRational::new(BigInt::one(), BigInt::from(u64::from(d)).pow(3));
        let expo = TruncatedSeries::exp_u_linear(1, order, order, &[BigInt::from(d)]);
        let mut term = TruncatedSeries::zero(1, 1, order, order);
        term.add_term(vec![d], vec![0], Scalar::from_rational(cover));
        s = s.add(&term.mul(&expo));
    }
    s
}

/// f(q_i · exp v_i) = Σ_{d=1..order} q_i^d · exp(d·v_i), the node-i series
/// appearing in every structural coefficient. Variables: q_1..q_k Novikov,
/// u^1..u^ρ directions. Node exponents are kept per node; the quotient by
/// curve relations is a separate operation (`NovikovLattice::reduce`).
fn node_f_series(m: &ExtremalModel, i: usize) -> TruncatedSeries {
    let (k, rho, order) = (m.k(), m.rho(), m.order);
    let form = m.node_linear_form(i);
    let mut s = TruncatedSeries::zero(k, rho, order, order);
    for d in 1..=order {
        let scaled: Vec<BigInt> = form.iter().map(|c| c * BigInt::from(d)).collect();
        let expo = TruncatedSeries::exp_u_linear(k, order, order, &scaled);
        let mut q_pow = TruncatedSeries::zero(k, rho, order, order);
        let mut nov = vec![0u32; k];
        nov[i] = d;
        q_pow.add_term(nov, vec![0; rho], Scalar::one());
        s = s.add(&q_pow.mul(&expo));
    }
    s
}

/// C_lmn(u) = (T_l.T_m.T_n) + Σ_i b_il·b_im·b_in·f(q_i·exp v_i). Indices are
/// 0-based and must be < ρ. The classical triple intersection defaults to 0
/// when the presentation carries none.
pub fn structural_coefficient(
    m: &ExtremalModel,
    l: usize,
    mn: usize,
    n: usize,
) -> Result<TruncatedSeries, Error> {
    let rho = m.rho();
    for idx in [l, mn, n] {
        if idx >= rho {
            return Err(Error::Dimension(format!("direction index {idx} out of range (ρ = {rho})")));
        }
    }
    let classical = match &m.presentation.triple {
        Some(t) => t.get(l, mn, n).clone(),
        None => BigRational::zero(),
    };
    let mut s = TruncatedSeries::constant(
        m.k(),
        rho,
        m.order,
        m.order,
        Scalar::from_rational(classical),
    );
    for i in 0..m.k() {
        let b = &m.presentation.b;
        let w = b.get(i, l) * b.get(i, mn) * b.get(i, n);
        if w.is_zero() {
            continue;
        }
        s = s.add(&node_f_series(m, i).mul_rational(&BigRational::from(w)));
    }
    Ok(s)
}

/// Residue of the Dubrovin connection along the node-i boundary divisor:
/// ρ×ρ matrix with (m,n) entry (1/z)·b_im·b_in.
pub fn dubrovin_residue(m: &ExtremalModel, i: usize) -> Result<ScalarMatrix, Error> {
    if i >= m.k() {
        return Err(Error::Dimension(format!("node index {i} out of range (k = {})", m.k())));
    }
    let rho = m.rho();
    let b = &m.presentation.b;
    let mut out = ScalarMatrix::zeros(rho, rho);
    for p in 0..rho {
        for q in 0..rho {
            let c = BigRational::from(b.get(i, p) * b.get(i, q));
            out.set(p, q, Scalar::monomial(0, 1, c));
        }
    }
    Ok(out)
}

/// Nilpotent monodromy block along direction l: (1/z)·B_lᵗ·B_l, where B_l
/// keeps exactly the rows of B with nonzero l-th entry.
pub fn monodromy_block(m: &ExtremalModel, l: usize) -> Result<ScalarMatrix, Error> {
    let rho = m.rho();
    if l >= rho {
        return Err(Error::Dimension(format!("direction index {l} out of range (ρ = {rho})")));
    }
    let b = &m.presentation.b;
    let bl = b.select_rows(|i| !b.get(i, l).is_zero());
    let prod = bl.transpose().mul(&bl);
    let mut out = ScalarMatrix::zeros(rho, rho);
    for p in 0..rho {
        for q in 0..rho {
            out.set(p, q, Scalar::monomial(0, 1, BigRational::from(prod.get(p, q).clone())));
        }
    }
    Ok(out)
}

/// Independent route to `monodromy_block`: N_{l,mn} = −(1/z)·Σ_i
/// b_il·b_im·b_in·Res_t f(exp(b_il·t)), with each residue extracted from an
/// actual Laurent expansion around t = 0 rather than read off a formula.
/// Nodes with b_il = 0 contribute nothing: their factor vanishes and the
/// series has no pole.
pub fn residue_oracle(m: &ExtremalModel, l: usize) -> Result<ScalarMatrix, Error> {
    let rho = m.rho();
    if l >= rho {
        return Err(Error::Dimension(format!("direction index {l} out of range (ρ = {rho})")));
    }
    let b = &m.presentation.b;
    let mut out = ScalarMatrix::zeros(rho, rho);
    for i in 0..m.k() {
        let bil = b.get(i, l);
        if bil.is_zero() {
            continue;
        }
        // f(e^{bt}) = e^{bt} / (1 − e^{bt}) = e^{bt} · (−1/(bt)) · g(t)⁻¹
        // with g = (e^{bt}−1)/(bt) a unit series.
        let depth = 4;
        let numer = Laurent1::exp_linear(bil, depth);
        let g_inv = Laurent1::exp_quotient(bil, depth).invert();
        let res = numer
            .mul(&g_inv)
            .scale(&-BigRational::from(bil.clone()).recip())
            .shift(-1)
            .coefficient(-1);
        for p in 0..rho {
            for q in 0..rho {
                let c = -BigRational::from(bil * b.get(i, p) * b.get(i, q)) * res.clone();
                if c.is_zero() {
                    continue;
                }
                let mut e = out.get(p, q).clone();
                e = &e + &Scalar::monomial(0, 1, c);
                out.set(p, q, e);
            }
        }
    }
    Ok(out)
}

/// The constant mixed blocks of the quantum product. One tensor c[l][m][ε]
/// serves both constant families of the connection; it must be symmetric in
/// (l, m). Zero by default: no formula for these constants exists in terms
/// of the relation matrices alone.
#[derive(Clone, Debug)]
pub struct MixedConstants {
    rho: usize,
    ambient: usize,
    entries: Vec<BigRational>,
}

impl MixedConstants {
    pub fn zero(rho: usize, ambient: usize) -> Self {
        MixedConstants { rho, ambient, entries: vec![BigRational::zero(); rho * rho * ambient] }
    }

    pub fn new(rho: usize, ambient: usize, entries: Vec<BigRational>) -> Result<Self, Error> {
        if entries.len() != rho * rho * ambient {
            return Err(Error::Dimension(format!(
                "mixed constants need {}·{}·{} entries, got {}",
                rho,
                rho,
                ambient,
                entries.len()
            )));
        }
        let c = MixedConstants { rho, ambient, entries };
        for l in 0..rho {
            for m in 0..l {
                for e in 0..ambient {
                    if c.get(l, m, e) != c.get(m, l, e) {
                        return Err(Error::InvalidPresentation(format!(
                            "mixed constants not symmetric at ({l},{m},{e})"
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn get(&self, l: usize, m: usize, e: usize) -> &BigRational {
        &self.entries[(l * self.rho + m) * self.ambient + e]
    }
}

/// Frame of the bundle the connection acts on. `Primal(m)` is T_m,
/// `Dual(n)` is Tⁿ, `Ambient(ε)` is a direction transverse to the extremal
/// block, `Unit` is T⁰.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FrameVector {
    Primal(usize),
    Dual(usize),
    Ambient(usize),
    Unit,
}

/// Coordinate direction of differentiation: U(l) is ∂/∂u^l, Ambient(ε) a
/// transverse constant direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    U(usize),
    Ambient(usize),
}

/// A bundle element written in the frame, with series coefficients.
#[derive(Clone, Debug)]
pub struct FrameElement {
    terms: BTreeMap<FrameVector, TruncatedSeries>,
}

impl FrameElement {
    fn new() -> Self {
        FrameElement { terms: BTreeMap::new() }
    }

    fn push(&mut self, v: FrameVector, s: TruncatedSeries) {
        if s.is_zero() {
            return;
        }
        match self.terms.remove(&v) {
            Some(prev) => {
                let sum = prev.add(&s);
                if !sum.is_zero() {
                    self.terms.insert(v, sum);
                }
            }
            None => {
                self.terms.insert(v, s);
            }
        }
    }

    pub fn coefficient(&self, v: FrameVector) -> Option<&TruncatedSeries> {
        self.terms.get(&v)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn sub(&self, other: &FrameElement) -> FrameElement {
        let mut out = self.clone();
        for (v, s) in &other.terms {
            out.push(*v, s.neg());
        }
        out
    }
}

/// The Dubrovin connection restricted to the extremal block and its
/// transverse completion. All covariant derivatives carry the overall −1/z;
/// coefficients live in the series ring over Q[λ, z⁻¹].
///
/// The three defining families:
///   ∇_{∂_l} Tᵐ = −(1/z)·δ_{lm}·T⁰
///   ∇_{∂_l} T_m = −(1/z)·(Σ_n C_lmn(u)·Tⁿ + Σ_ε c[l][m][ε]·Ambient(ε))
///   ∇_{∂_ε} T_m = −(1/z)·Σ_n c[m][n][ε]·Tⁿ
/// All remaining frame actions are forced by the same pattern: ambient
/// vectors are parallel along u-directions, ∇_{∂_ε} Ambient(ε′) =
/// −(1/z)·δ_{εε′}·T⁰, and T⁰ is parallel in every direction.
pub struct DubrovinConnection {
    rho: usize,
    k: usize,
    order: u32,
    structural: Vec<TruncatedSeries>,
    mixed: MixedConstants,
}

/// Builds the connection tables for a model, with the constant mixed blocks
/// supplied by the caller (use `MixedConstants::zero` when none are known).
pub fn dubrovin_connection(
    m: &ExtremalModel,
    mixed: MixedConstants,
) -> Result<DubrovinConnection, Error> {
    let rho = m.rho();
    if mixed.rho() != rho {
        return Err(Error::Dimension(format!(
            "mixed constants sized for ρ = {}, model has ρ = {rho}",
            mixed.rho()
        )));
    }
    let mut structural = Vec::with_capacity(rho * rho * rho);
    for l in 0..rho {
        for mm in 0..rho {
            for n in 0..rho {
                structural.push(structural_coefficient(m, l, mm, n)?);
            }
        }
    }
    Ok(DubrovinConnection { rho, k: m.k(), order: m.order, structural, mixed })
}

impl DubrovinConnection {
    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn ambient(&self) -> usize {
        self.mixed.ambient()
    }

    pub fn structural(&self, l: usize, m: usize, n: usize) -> &TruncatedSeries {
        &self.structural[(l * self.rho + m) * self.rho + n]
    }

    fn constant(&self, c: &BigRational) -> TruncatedSeries {
        TruncatedSeries::constant(
            self.k,
            self.rho,
            self.order,
            self.order,
            Scalar::from_rational(c.clone()),
        )
    }

    fn minus_z_inv(&self) -> Scalar {
        Scalar::monomial(0, 1, -BigRational::one())
    }

    /// ∇_dir applied to a single frame vector.
    pub fn apply(&self, dir: Direction, v: FrameVector) -> FrameElement {
        let mut out = FrameElement::new();
        let scale = self.minus_z_inv();
        match (dir, v) {
            (Direction::U(l), FrameVector::Dual(m)) => {
                if l == m {
                    out.push(FrameVector::Unit, self.constant(&BigRational::one()).scale(&scale));
                }
            }
            (Direction::U(l), FrameVector::Primal(m)) => {
                for n in 0..self.rho {
                    out.push(FrameVector::Dual(n), self.structural(l, m, n).scale(&scale));
                }
                for e in 0..self.mixed.ambient() {
                    out.push(
                        FrameVector::Ambient(e),
                        self.constant(self.mixed.get(l, m, e)).scale(&scale),
                    );
                }
            }
            (Direction::Ambient(e), FrameVector::Primal(m)) => {
                for n in 0..self.rho {
                    out.push(
                        FrameVector::Dual(n),
                        self.constant(self.mixed.get(m, n, e)).scale(&scale),
                    );
                }
            }
            (Direction::Ambient(e), FrameVector::Ambient(e2)) => {
                if e == e2 {
                    out.push(FrameVector::Unit, self.constant(&BigRational::one()).scale(&scale));
                }
            }
            // ambient vectors along u-directions, duals along ambient
            // directions, and T⁰ everywhere are parallel
            (Direction::U(_), FrameVector::Ambient(_))
            | (Direction::Ambient(_), FrameVector::Dual(_))
            | (_, FrameVector::Unit) => {}
        }
        out
    }

    /// ∇_dir extended to frame elements by the Leibniz rule. Series
    /// coefficients do not depend on ambient coordinates, so those
    /// directional derivatives vanish.
    pub fn apply_element(&self, dir: Direction, el: &FrameElement) -> FrameElement {
        let mut out = FrameElement::new();
        for (v, coeff) in &el.terms {
            if let Direction::U(l) = dir {
                out.push(*v, coeff.derivative_u(l));
            }
            let step = self.apply(dir, *v);
            for (w, s) in &step.terms {
                out.push(*w, s.mul(coeff));
            }
        }
        out
    }

    /// Curvature component [∇_a, ∇_b] applied to a frame vector. The
    /// coordinate fields commute, so this is the full curvature.
    pub fn curvature(&self, a: Direction, b: Direction, v: FrameVector) -> FrameElement {
        let ab = self.apply_element(a, &self.apply(b, v));
        let ba = self.apply_element(b, &self.apply(a, v));
        ab.sub(&ba)
    }

    /// Every direction of differentiation, extremal then ambient.
    pub fn directions(&self) -> Vec<Direction> {
        (0..self.rho)
            .map(Direction::U)
            .chain((0..self.mixed.ambient()).map(Direction::Ambient))
            .collect()
    }

    /// The full frame, in a fixed order.
    pub fn frame(&self) -> Vec<FrameVector> {
        (0..self.rho)
            .map(FrameVector::Primal)
            .chain((0..self.rho).map(FrameVector::Dual))
            .chain((0..self.mixed.ambient()).map(FrameVector::Ambient))
            .chain(std::iter::once(FrameVector::Unit))
            .collect()
    }
}

/// The quotient of the node-class lattice Z^k by the saturated span of the
/// curve relations. Canonical forms come from the row transform of the
/// relation matrix's Smith decomposition: the bottom rows of U vanish
/// exactly on the saturated span.
#[derive(Clone, Debug)]
pub struct NovikovLattice {
    k: usize,
    reduction: IntMatrix,
}

impl NovikovLattice {
    pub fn new(a: &IntMatrix) -> Self {
        let k = a.rows();
        let r = rank(a);
        let snf = smith_normal_form(a);
        let keep: Vec<usize> = (r..k).collect();
        let mut reduction = IntMatrix::zeros(k - r, k);
        for (out_i, &i) in keep.iter().enumerate() {
            for j in 0..k {
                reduction.set(out_i, j, snf.u.get(i, j).clone());
            }
        }
        NovikovLattice { k, reduction }
    }

    pub fn from_presentation(p: &TransitionPresentation) -> Self {
        Self::new(&p.a)
    }

    pub fn generators(&self) -> usize {
        self.k
    }

    /// Rank of the quotient lattice.
    pub fn rank(&self) -> usize {
        self.reduction.rows()
    }

    /// Canonical representative of a node-exponent class. Two exponents
    /// reduce equal exactly when their difference is a rational combination
    /// of relations with integer saturation.
    pub fn reduce(&self, exponent: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        if exponent.len() != self.k {
            return Err(Error::Dimension(format!(
                "exponent length {} does not match {} generators",
                exponent.len(),
                self.k
            )));
        }
        Ok((0..self.reduction.rows())
            .map(|i| (0..self.k).map(|j| self.reduction.get(i, j) * &exponent[j]).sum())
            .collect())
    }
}

/// One prepotential coefficient on the blown-down side: a curve class over
/// the chosen degree-2 basis and its invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwEntry {
    pub class: Vec<BigInt>,
    pub n: BigRational,
}

/// A transported coefficient: the original base class together with the
/// canonical exponent of its extremal component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportedEntry {
    pub base: Vec<BigInt>,
    pub ext: Vec<BigInt>,
    pub n: BigRational,
}

/// Output of the prepotential transport. `cross_terms` is the classical
/// cubic correction ((s+u)³ − s³ − u³)/3! recorded as (s-degree, u-degree,
/// weight) triples; the cup products it multiplies are the caller's data.
#[derive(Clone, Debug)]
pub struct TransformResult {
    pub entries: Vec<TransportedEntry>,
    pub cross_terms: Vec<(u32, u32, BigRational)>,
}

/// Transports a coefficient list through the transition: base classes pass
/// through (optionally lifted into the node lattice and reduced), and the
/// extremal multiple-cover contributions n_{d[C_i]} = 1/d³ are merged in per
/// canonical class, for d up to `order`. `lift` is a k×σ matrix expressing
/// the chosen lift of each base generator in node coordinates; omitted means
/// the zero lift.
pub fn transform_prepotential(
    m: &ExtremalModel,
    fx: &[GwEntry],
    lift: Option<&IntMatrix>,
    order: u32,
) -> Result<TransformResult, Error> {
    let k = m.k();
    let sigma = fx.first().map_or_else(|| lift.map_or(0, IntMatrix::cols), |e| e.class.len());
    if let Some(l) = lift {
        if l.rows() != k || l.cols() != sigma {
            return Err(Error::Dimension(format!(
                "lift must be {k}×{sigma}, got {}×{}",
                l.rows(),
                l.cols()
            )));
        }
    }
    let lattice = NovikovLattice::from_presentation(&m.presentation);
    let mut merged: BTreeMap<(Vec<BigInt>, Vec<BigInt>), BigRational> = BTreeMap::new();
    for entry in fx {
        if entry.class.len() != sigma {
            return Err(Error::Dimension(format!(
                "class length {} differs from {sigma}",
                entry.class.len()
            )));
        }
        let ext = match lift {
            Some(l) => lattice.reduce(&l.apply(&entry.class))?,
            None => vec![BigInt::zero(); lattice.rank()],
        };
        *merged.entry((entry.class.clone(), ext)).or_insert_with(BigRational::zero) +=
            entry.n.clone();
    }
    for i in 0..k {
        for d in 1..=order {
            let mut node = vec![BigInt::zero(); k];
            node[i] = BigInt::from(d);
            let ext = lattice.reduce(&node)?;
            let cover = BigRational::new(BigInt::one(), BigInt::from(u64::from(d)).pow(3));
            *merged
                .entry((vec![BigInt::zero(); sigma], ext))
                .or_insert_with(BigRational::zero) += cover;
        }
    }
    let entries = merged
        .into_iter()
        .filter(|(_, n)| !n.is_zero())
        .map(|((base, ext), n)| TransportedEntry { base, ext, n })
        .collect();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    Ok(TransformResult { entries, cross_terms: vec![(2, 1, half.clone()), (1, 2, half)] })
}

/// Inverse transport: kill the extremal Novikov symbols and keep what maps
/// to a nonzero base class. Composed after `transform_prepotential` this
/// recovers the input list.
pub fn restrict_prepotential(entries: &[TransportedEntry]) -> Vec<GwEntry> {
    let mut merged: BTreeMap<Vec<BigInt>, BigRational> = BTreeMap::new();
    for e in entries {
        if e.base.iter().all(|c| c.is_zero()) {
            continue;
        }
        *merged.entry(e.base.clone()).or_insert_with(BigRational::zero) += e.n.clone();
    }
    merged
        .into_iter()
        .filter(|(_, n)| !n.is_zero())
        .map(|(class, n)| GwEntry { class, n })
        .collect()
}
