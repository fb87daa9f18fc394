//! Finite root systems, Weyl groups and coroot-lattice enumeration.
//!
//! Everything is exact: weights live in the simple-root basis with rational
//! coordinates and the bilinear form is `u^T G v` with `G` the Gram matrix
//! `(α_i|α_j)`, normalised so that long roots have square length 2.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{floor_sqrt, nullspace, rank, RatMatrix};
use crate::report::{Mode, VerificationReport};
use crate::{int, Rat};

/// Hard cap on the Weyl group order accepted from user-supplied Cartan data.
pub const DEFAULT_WEYL_BOUND: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSysError {
    #[error("unknown algebra label `{0}` (expected A1, B2, D4 or a Cartan matrix)")]
    UnknownLabel(String),
    #[error("Gram matrix is not positive definite (leading minors {0})")]
    NotPositiveDefinite(String),
    #[error("Cartan matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("grading mismatch: (β|x) != 1 for β in {0}")]
    GradingMismatch(String),
    #[error("Weyl group closure exceeded the safety bound of {0} elements")]
    WeylBound(usize),
    #[error("operation needs rank >= 2, got rank {0}")]
    RankTooSmall(usize),
    #[error("frame vectors are linearly dependent")]
    DependentFrame,
    #[error("frame vector {0} is not orthogonal to every β_j")]
    FrameNotCentral(String),
    #[error("sl2 data needs at least one β")]
    NoBetas,
}

pub type Result<T> = std::result::Result<T, RootSysError>;

/// A vector of `h̄*` in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub coords: Vec<Rat>,
}

impl Weight {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![Rat::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.coords[i] = Rat::one();
        w
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: Rat) -> Self {
        Self::new(self.coords.iter().map(|v| v * c).collect())
    }

    /// Sum of coordinates; the height when the weight is a root.
    pub fn height(&self) -> Rat {
        self.coords.iter().fold(Rat::zero(), |a, b| a + b)
    }

    fn check_rank(&self, other: &Weight) {
        assert_eq!(self.rank(), other.rank(), "weight rank mismatch");
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.check_rank(rhs);
        Weight::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self.check_rank(rhs);
        Weight::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(self.coords.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `level·Λ0 + λ̄ + delta_coeff·δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineWeight {
    pub level: Rat,
    pub finite: Weight,
    pub delta_coeff: Rat,
}

impl AffineWeight {
    pub fn new(level: Rat, finite: Weight) -> Self {
        Self { level, finite, delta_coeff: Rat::zero() }
    }

    /// `Λ0` itself.
    pub fn lambda0(rank: usize) -> Self {
        Self::new(Rat::one(), Weight::zero(rank))
    }

    /// `δ` itself.
    pub fn delta(rank: usize) -> Self {
        Self { level: Rat::zero(), finite: Weight::zero(rank), delta_coeff: Rat::one() }
    }

    pub fn add(&self, other: &AffineWeight) -> AffineWeight {
        AffineWeight {
            level: self.level + other.level,
            finite: &self.finite + &other.finite,
            delta_coeff: self.delta_coeff + other.delta_coeff,
        }
    }
}

/// An element of the finite Weyl group, acting on simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: RatMatrix,
    pub sign: i8,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn apply(&self, v: &Weight) -> Weight {
        Weight::new(self.matrix.apply(&v.coords))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend(&other.word);
        WeylElement {
            matrix: &self.matrix * &other.matrix,
            sign: self.sign * other.sign,
            word,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            matrix: self.matrix.inverse().expect("Weyl elements are invertible"),
            sign: self.sign,
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            "id".to_string()
        } else {
            self.word.iter().map(|i| format!("r{}", i + 1)).collect::<Vec<_>>().join("")
        }
    }
}

/// Basis of a subspace of `h̄`, with display names for the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub basis: Vec<Weight>,
    pub var_names: Vec<String>,
}

impl Frame {
    pub fn new(basis: Vec<Weight>, var_names: Vec<String>) -> Result<Self> {
        assert_eq!(basis.len(), var_names.len(), "one name per frame vector");
        if let Some(first) = basis.first() {
            let n = first.rank();
            let rows: Vec<Vec<Rat>> = basis.iter().map(|b| b.coords.clone()).collect();
            if rank(&rows, n) != basis.len() {
                return Err(RootSysError::DependentFrame);
            }
        }
        Ok(Self { basis, var_names })
    }

    pub fn empty() -> Self {
        Self { basis: Vec::new(), var_names: Vec::new() }
    }

    /// Default names: `z` for a one-dimensional frame, `z1, z2, …` otherwise.
    pub fn with_default_names(basis: Vec<Weight>) -> Result<Self> {
        let names = if basis.len() == 1 {
            vec!["z".to_string()]
        } else {
            (1..=basis.len()).map(|i| format!("z{i}")).collect()
        };
        Self::new(basis, names)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Nilpotent data `f = Σ e_{−β_j}` with grading element `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub x: Weight,
    pub betas: Vec<Weight>,
    pub hf_frame: Frame,
    pub x_norm_sq: Rat,
}

impl Sl2Triple {
    /// Replaces the canonical centralizer frame by another basis of the same
    /// space (e.g. the `α_i/2` normalisation used for D4).
    pub fn with_frame(mut self, rs: &RootSystem, frame: Frame) -> Result<Self> {
        if frame.dim() != self.hf_frame.dim() {
            return Err(RootSysError::RankMismatch { expected: self.hf_frame.dim(), got: frame.dim() });
        }
        for b in &frame.basis {
            if self.betas.iter().any(|beta| !rs.inner(beta, b).is_zero()) {
                return Err(RootSysError::FrameNotCentral(b.to_string()));
            }
        }
        self.hf_frame = frame;
        Ok(self)
    }
}

/// Exact data of a finite simple root system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub label: String,
    pub rank: usize,
    pub gram: RatMatrix,
    /// Positive roots by (height, lexicographic coordinates).
    pub positive_roots: Vec<Weight>,
    pub theta: Weight,
    pub theta_s: Weight,
    pub rho_bar: Weight,
    pub h_dual: i64,
    pub fundamental_weights: Vec<Weight>,
    pub coroot_basis: Vec<Weight>,
    gram_inv: RatMatrix,
    coroot_gram_inv: RatMatrix,
}

impl RootSystem {
    /// `A1`, `B2` or `D4` (α2 the central node).
    pub fn from_label(label: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = match label {
            "A1" => vec![vec![2]],
            "B2" => vec![vec![2, -1], vec![-1, 1]],
            "D4" => vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, -1],
                vec![0, -1, 2, 0],
                vec![0, -1, 0, 2],
            ],
            other => return Err(RootSysError::UnknownLabel(other.to_string())),
        };
        Self::from_gram(label, RatMatrix::from_int_rows(&rows))
    }

    /// Builds from a Cartan matrix `a_ij = 2(α_i|α_j)/(α_i|α_i)` by
    /// symmetrization along the Dynkin graph; long roots get length 2.
    pub fn from_cartan(label: &str, cartan: &[Vec<i64>]) -> Result<Self> {
        let n = cartan.len();
        if n == 0 || cartan.iter().any(|r| r.len() != n) {
            return Err(RootSysError::NotSymmetrizable("matrix must be square and nonempty".into()));
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(RootSysError::NotSymmetrizable(format!("a_{i}{i} != 2")));
            }
            for j in 0..n {
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(RootSysError::NotSymmetrizable(format!("zero pattern at ({i},{j})")));
                }
            }
        }
        // (α_i|α_i) up to a global factor, propagated along edges.
        let mut d: Vec<Option<Rat>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Rat::one());
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].unwrap();
                for j in 0..n {
                    if i == j || cartan[i][j] == 0 {
                        continue;
                    }
                    let dj = di * Rat::new(cartan[i][j], cartan[j][i]);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            queue.push_back(j);
                        }
                        Some(prev) if prev != dj => {
                            return Err(RootSysError::NotSymmetrizable(format!(
                                "inconsistent lengths at node {j}"
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        let d: Vec<Rat> = d.into_iter().map(Option::unwrap).collect();
        let max = d.iter().copied().max().unwrap();
        let norm = int(2) / max;
        let mut g = RatMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, d[i] * norm * int(cartan[i][j]) / int(2));
            }
        }
        Self::from_gram(label, g)
    }

    pub fn from_gram(label: &str, gram: RatMatrix) -> Result<Self> {
        let n = gram.dim();
        if !gram.is_symmetric() {
            return Err(RootSysError::NotSymmetrizable("Gram matrix is not symmetric".into()));
        }
        let minors = gram.leading_minors();
        if minors.iter().any(|m| !m.is_positive()) {
            let s: Vec<String> = minors.iter().map(|m| m.to_string()).collect();
            return Err(RootSysError::NotPositiveDefinite(s.join(", ")));
        }
        let gram_inv = gram.inverse().expect("positive definite matrices are invertible");

        let simple: Vec<Weight> = (0..n).map(|i| Weight::unit(n, i)).collect();
        let coroot_basis: Vec<Weight> =
            (0..n).map(|i| Weight::unit(n, i).scale(int(2) / gram.get(i, i))).collect();

        // Orbit of the simple roots under simple reflections.
        let pairing = |v: &Weight, i: usize| -> Rat {
            (0..n).fold(Rat::zero(), |acc, k| acc + v.coords[k] * gram.get(k, i)) * int(2)
                / gram.get(i, i)
        };
        let mut seen: HashSet<Weight> = simple.iter().cloned().collect();
        let mut queue: VecDeque<Weight> = simple.iter().cloned().collect();
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                let c = pairing(&v, i);
                if c.is_zero() {
                    continue;
                }
                let mut r = v.clone();
                r.coords[i] -= c;
                if seen.insert(r.clone()) {
                    if seen.len() > 2 * DEFAULT_WEYL_BOUND {
                        return Err(RootSysError::WeylBound(DEFAULT_WEYL_BOUND));
                    }
                    queue.push_back(r);
                }
            }
        }
        let mut positive_roots: Vec<Weight> =
            seen.into_iter().filter(|r| r.coords.iter().all(|c| !c.is_negative())).collect();
        positive_roots.sort_by(|a, b| (a.height(), &a.coords).cmp(&(b.height(), &b.coords)));

        let norm = |v: &Weight| -> Rat {
            let gv = gram.apply(&v.coords);
            v.coords.iter().zip(&gv).fold(Rat::zero(), |a, (x, y)| a + x * y)
        };
        let theta = positive_roots.last().cloned().expect("nonempty root system");
        let short = positive_roots.iter().map(&norm).min().unwrap();
        let theta_s = positive_roots.iter().rev().find(|r| norm(r) == short).cloned().unwrap();

        let mut rho_bar = Weight::zero(n);
        for r in &positive_roots {
            rho_bar = &rho_bar + r;
        }
        rho_bar = rho_bar.scale(Rat::new(1, 2));

        // (α_k | α_j∨) pairing matrix; its inverse holds the Λ̄_i as rows.
        let mut p = RatMatrix::zeros(n);
        for k in 0..n {
            for j in 0..n {
                p.set(k, j, int(2) * gram.get(k, j) / gram.get(j, j));
            }
        }
        let p_inv = p.inverse().expect("Cartan matrix of a finite type is invertible");
        let fundamental_weights: Vec<Weight> =
            p_inv.rows().into_iter().map(Weight::new).collect();

        // h∨ = 1 + (ρ̄|θ∨) with θ long.
        let theta_norm = norm(&theta);
        let gt = gram.apply(&theta.coords);
        let rho_theta = rho_bar.coords.iter().zip(&gt).fold(Rat::zero(), |a, (x, y)| a + x * y);
        let h = Rat::one() + rho_theta * int(2) / theta_norm;
        assert!(h.is_integer(), "dual Coxeter number must be integral");

        let mut gc = RatMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let ci = &coroot_basis[i];
                let cj = &coroot_basis[j];
                gc.set(i, j, ci.coords[i] * gram.get(i, j) * cj.coords[j]);
            }
        }
        let coroot_gram_inv = gc.inverse().unwrap();

        Ok(Self {
            label: label.to_string(),
            rank: n,
            gram,
            positive_roots,
            theta,
            theta_s,
            rho_bar,
            h_dual: h.to_integer(),
            fundamental_weights,
            coroot_basis,
            gram_inv,
            coroot_gram_inv,
        })
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::unit(self.rank, i)
    }

    /// All roots: positive ones first (height order), then their negatives
    /// in the same order.
    pub fn roots(&self) -> Vec<Weight> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(|r| -r));
        all
    }

    pub fn is_root(&self, v: &Weight) -> bool {
        self.positive_roots.iter().any(|r| r == v || &(-r) == v)
    }

    /// `(u|v)` for finite weights.
    pub fn inner(&self, u: &Weight, v: &Weight) -> Rat {
        assert_eq!(u.rank(), self.rank, "weight rank mismatch");
        assert_eq!(v.rank(), self.rank, "weight rank mismatch");
        let gv = self.gram.apply(&v.coords);
        u.coords.iter().zip(&gv).fold(Rat::zero(), |a, (x, y)| a + x * y)
    }

    pub fn checked_inner(&self, u: &Weight, v: &Weight) -> Result<Rat> {
        for w in [u, v] {
            if w.rank() != self.rank {
                return Err(RootSysError::RankMismatch { expected: self.rank, got: w.rank() });
            }
        }
        Ok(self.inner(u, v))
    }

    pub fn norm_sq(&self, u: &Weight) -> Rat {
        self.inner(u, u)
    }

    /// Affine pairing with `(Λ0|Λ0) = (δ|δ) = 0`, `(Λ0|δ) = 1`.
    pub fn inner_affine(&self, u: &AffineWeight, v: &AffineWeight) -> Result<Rat> {
        let finite = self.checked_inner(&u.finite, &v.finite)?;
        Ok(finite + u.level * v.delta_coeff + u.delta_coeff * v.level)
    }

    pub fn coroot(&self, alpha: &Weight) -> Result<Weight> {
        if !self.is_root(alpha) {
            return Err(RootSysError::NotARoot(alpha.to_string()));
        }
        Ok(alpha.scale(int(2) / self.norm_sq(alpha)))
    }

    /// `r_β(v) = v − (v|β∨) β` for any nonzero `β`.
    pub fn reflect(&self, beta: &Weight, v: &Weight) -> Weight {
        let c = self.inner(v, beta) * int(2) / self.norm_sq(beta);
        v - &beta.scale(c)
    }

    /// Matrix of `r_β` on simple-root coordinates.
    pub fn reflection(&self, beta: &Weight) -> WeylElement {
        let n = self.rank;
        let cols: Vec<Weight> = (0..n).map(|i| self.reflect(beta, &Weight::unit(n, i))).collect();
        let mut m = RatMatrix::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, c.coords[i]);
            }
        }
        WeylElement { matrix: m, sign: -1, word: Vec::new() }
    }

    pub fn weyl_group(&self) -> Result<Vec<WeylElement>> {
        self.weyl_group_bounded(DEFAULT_WEYL_BOUND)
    }

    /// Breadth-first closure `w ↦ w·s_i`; elements come out in shortlex order
    /// of their minimal words.
    pub fn weyl_group_bounded(&self, bound: usize) -> Result<Vec<WeylElement>> {
        let n = self.rank;
        let gens: Vec<WeylElement> = (0..n)
            .map(|i| {
                let mut s = self.reflection(&self.simple_root(i));
                s.word = vec![i];
                s
            })
            .collect();
        let id = WeylElement { matrix: RatMatrix::identity(n), sign: 1, word: Vec::new() };
        let mut seen: HashSet<RatMatrix> = HashSet::from([id.matrix.clone()]);
        let mut out = vec![id];
        let mut head = 0;
        while head < out.len() {
            let cur = out[head].clone();
            head += 1;
            for g in &gens {
                let next = cur.compose(g);
                if seen.insert(next.matrix.clone()) {
                    if out.len() >= bound {
                        return Err(RootSysError::WeylBound(bound));
                    }
                    out.push(next);
                }
            }
        }
        Ok(out)
    }

    /// `h̄^f = {h : (β_j|h) = 0}` as a canonical echelon basis.
    pub fn centralizer_in_cartan(&self, betas: &[Weight]) -> Result<Frame> {
        for b in betas {
            if !self.is_root(b) {
                return Err(RootSysError::NotARoot(b.to_string()));
            }
        }
        let rows: Vec<Vec<Rat>> = betas.iter().map(|b| self.gram.apply(&b.coords)).collect();
        let basis: Vec<Weight> = nullspace(&rows, self.rank).into_iter().map(Weight::new).collect();
        Frame::with_default_names(basis)
    }

    pub fn validate_sl2(&self, x: &Weight, betas: &[Weight]) -> Result<Sl2Triple> {
        if betas.is_empty() {
            return Err(RootSysError::NoBetas);
        }
        if x.rank() != self.rank {
            return Err(RootSysError::RankMismatch { expected: self.rank, got: x.rank() });
        }
        let bad: Vec<String> = betas
            .iter()
            .filter(|b| self.inner(b, x) != Rat::one())
            .map(|b| b.to_string())
            .collect();
        if !bad.is_empty() {
            return Err(RootSysError::GradingMismatch(bad.join(", ")));
        }
        let hf_frame = self.centralizer_in_cartan(betas)?;
        Ok(Sl2Triple {
            x: x.clone(),
            betas: betas.to_vec(),
            hf_frame,
            x_norm_sq: self.norm_sq(x),
        })
    }

    /// The `γ ∈ Q̄∨` with `|shift + scale·γ|² ≤ bound`, sorted by that norm
    /// and then by coordinates.
    ///
    /// Completeness: writing `γ = Σ n_i α_i∨` and `c = −shift/scale` in the
    /// coroot basis, Cauchy–Schwarz in the dual basis gives
    /// `(n_i − c_i)² ≤ bound/scale² · (G_c^{-1})_{ii}`.
    pub fn enumerate_lattice(&self, shift: &Weight, scale: Rat, bound: Rat) -> Vec<Weight> {
        assert!(scale.is_positive(), "lattice scale must be positive");
        if bound.is_negative() {
            return Vec::new();
        }
        let n = self.rank;
        // shift in coroot coordinates: shift_i / coroot_scale_i
        let c: Vec<Rat> = (0..n)
            .map(|i| -shift.coords[i] / (self.coroot_basis[i].coords[i] * scale))
            .collect();
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|i| {
                let r2 = bound / (scale * scale) * self.coroot_gram_inv.get(i, i);
                let r = floor_sqrt(r2) + 1;
                (c[i].floor().to_integer() - r, c[i].ceil().to_integer() + r)
            })
            .collect();

        // Norm via integers: |shift + scale γ|² = Q(v) with v = shift + scale·γ.
        let mut out: Vec<(Rat, Weight)> = Vec::new();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let gamma = Weight::new(
                (0..n).map(|i| self.coroot_basis[i].coords[i] * int(idx[i])).collect(),
            );
            let v = Weight::new(
                (0..n).map(|i| shift.coords[i] + scale * gamma.coords[i]).collect(),
            );
            let nv = self.norm_sq(&v);
            if nv <= bound {
                out.push((nv, gamma));
            }
            // odometer
            let mut k = 0;
            loop {
                if k == n {
                    out.sort();
                    return out.into_iter().map(|(_, g)| g).collect();
                }
                idx[k] += 1;
                if idx[k] <= ranges[k].1 {
                    break;
                }
                idx[k] = ranges[k].0;
                k += 1;
            }
        }
    }

    /// Coordinates of `v` in the coroot basis (integral exactly on `Q̄∨`).
    pub fn coroot_coords(&self, v: &Weight) -> Vec<Rat> {
        (0..self.rank).map(|i| v.coords[i] / self.coroot_basis[i].coords[i]).collect()
    }

    pub fn in_coroot_lattice(&self, v: &Weight) -> bool {
        self.coroot_coords(v).iter().all(|c| c.is_integer())
    }

    /// Solves `(β_j|x) = 1` for `x` inside the span of the `β_j`.
    pub fn grading_for(&self, betas: &[Weight]) -> Option<Weight> {
        let k = betas.len();
        let mut m = RatMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.inner(&betas[i], &betas[j]));
            }
        }
        let inv = m.inverse()?;
        let coef = inv.apply(&vec![Rat::one(); k]);
        let mut x = Weight::zero(self.rank);
        for (c, b) in coef.iter().zip(betas) {
            x = &x + &b.scale(*c);
        }
        Some(x)
    }

    pub fn gram_inverse(&self) -> &RatMatrix {
        &self.gram_inv
    }
}

/// Checks: for distinct roots α ≠ β, `(α|β∨) ≠ 2` or `(α∨|β) ≠ 2`.
pub fn root_pair_check(rs: &RootSystem) -> Result<VerificationReport> {
    if rs.rank < 2 {
        return Err(RootSysError::RankTooSmall(rs.rank));
    }
    let roots = rs.roots();
    let mut report = VerificationReport::new(format!("root-pairs-{}", rs.label), Mode::Exact);
    let mut pairs = 0usize;
    let mut bad = Vec::new();
    for a in &roots {
        for b in &roots {
            if a == b {
                continue;
            }
            pairs += 1;
            let ab = rs.inner(a, b);
            let a_bv = ab * int(2) / rs.norm_sq(b);
            let av_b = ab * int(2) / rs.norm_sq(a);
            if a_bv == int(2) && av_b == int(2) {
                bad.push(format!("{a} / {b}"));
            }
        }
    }
    report.record(
        bad.is_empty(),
        bad.len() as f64,
        format!("{} ordered pairs of distinct roots, {} violations {:?}", pairs, bad.len(), bad),
    );
    Ok(report)
}

/// Least common multiple of the coordinate denominators.
pub fn denominator_lcm(w: &Weight) -> i64 {
    w.coords.iter().fold(1i64, |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    #[test]
    fn b2_data() {
        let rs = RootSystem::from_label("B2").unwrap();
        assert_eq!(rs.theta, w(&[1, 2]));
        assert_eq!(rs.theta_s, w(&[1, 1]));
        assert_eq!(rs.h_dual, 3);
        assert_eq!(rs.rho_bar, Weight::new(vec![rat(3, 2), int(2)]));
        assert_eq!(rs.norm_sq(&rs.rho_bar), rat(5, 2));
        assert_eq!(rs.positive_roots.len(), 4);
        assert_eq!(rs.fundamental_weights[0], w(&[1, 1]));
        assert_eq!(rs.fundamental_weights[1], Weight::new(vec![rat(1, 2), int(1)]));
        assert_eq!(rs.inner(&w(&[1, 0]), &w(&[0, 1])), int(-1));
    }

    #[test]
    fn d4_data() {
        let rs = RootSystem::from_label("D4").unwrap();
        assert_eq!(rs.theta, w(&[1, 2, 1, 1]));
        assert_eq!(rs.theta_s, rs.theta);
        assert_eq!(rs.h_dual, 6);
        assert_eq!(rs.positive_roots.len(), 12);
        assert_eq!(rs.rho_bar, w(&[3, 5, 3, 3]));
    }

    #[test]
    fn a1_data() {
        let rs = RootSystem::from_label("A1").unwrap();
        assert_eq!(rs.theta, w(&[1]));
        assert_eq!(rs.h_dual, 2);
        assert_eq!(rs.rho_bar, Weight::new(vec![rat(1, 2)]));
        assert!(root_pair_check(&rs).is_err());
    }

    #[test]
    fn unknown_label_and_bad_gram() {
        assert!(matches!(RootSystem::from_label("E9"), Err(RootSysError::UnknownLabel(_))));
        let g = RatMatrix::from_int_rows(&[vec![1, 2], vec![2, 1]]);
        assert!(matches!(RootSystem::from_gram("X", g), Err(RootSysError::NotPositiveDefinite(_))));
    }

    #[test]
    fn cartan_symmetrization_matches_b2() {
        // a_12 = 2(α1|α2)/(α1|α1) = -1, a_21 = 2(α2|α1)/(α2|α2) = -2
        let rs = RootSystem::from_cartan("B2", &[vec![2, -1], vec![-2, 2]]).unwrap();
        assert_eq!(rs.gram, RatMatrix::from_int_rows(&[vec![2, -1], vec![-1, 1]]));
        let g2 = RootSystem::from_cartan("G2", &[vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(g2.positive_roots.len(), 6);
        assert_eq!(g2.weyl_group().unwrap().len(), 12);
        assert_eq!(g2.h_dual, 4);
    }

    #[test]
    fn weyl_group_orders_and_signs() {
        let b2 = RootSystem::from_label("B2").unwrap();
        let wg = b2.weyl_group().unwrap();
        assert_eq!(wg.len(), 8);
        assert_eq!(wg.iter().filter(|e| e.sign == 1).count(), 4);
        assert!(wg[0].word.is_empty());
        assert_eq!(RootSystem::from_label("D4").unwrap().weyl_group().unwrap().len(), 192);
        let a1 = RootSystem::from_label("A1").unwrap().weyl_group().unwrap();
        assert_eq!(a1.iter().map(|e| e.sign).collect::<Vec<_>>(), vec![1, -1]);
        assert!(matches!(b2.weyl_group_bounded(5), Err(RootSysError::WeylBound(5))));
    }

    #[test]
    fn coroots() {
        let rs = RootSystem::from_label("B2").unwrap();
        assert_eq!(rs.coroot(&w(&[0, 1])).unwrap(), w(&[0, 2]));
        assert_eq!(rs.coroot(&rs.theta).unwrap(), rs.theta);
        assert_eq!(rs.coroot(&rs.theta_s).unwrap(), w(&[2, 2]));
        assert!(rs.coroot(&w(&[1, 3])).is_err());
    }

    #[test]
    fn centralizers() {
        let rs = RootSystem::from_label("B2").unwrap();
        assert_eq!(rs.centralizer_in_cartan(std::slice::from_ref(&rs.theta)).unwrap().basis, vec![w(&[1, 0])]);
        assert_eq!(rs.centralizer_in_cartan(std::slice::from_ref(&rs.theta_s)).unwrap().basis, vec![w(&[0, 1])]);
        assert_eq!(rs.centralizer_in_cartan(&[w(&[1, 0]), w(&[0, 1])]).unwrap().dim(), 0);
        let d4 = RootSystem::from_label("D4").unwrap();
        let f = d4.centralizer_in_cartan(std::slice::from_ref(&d4.theta)).unwrap();
        assert_eq!(f.basis, vec![w(&[1, 0, 0, 0]), w(&[0, 0, 1, 0]), w(&[0, 0, 0, 1])]);
    }

    #[test]
    fn sl2_validation() {
        let rs = RootSystem::from_label("B2").unwrap();
        let x = rs.theta.scale(rat(1, 2));
        let t = rs.validate_sl2(&x, std::slice::from_ref(&rs.theta)).unwrap();
        assert_eq!(t.x_norm_sq, rat(1, 2));
        let t2 = rs.validate_sl2(&rs.theta_s, std::slice::from_ref(&rs.theta_s)).unwrap();
        assert_eq!(t2.x_norm_sq, int(1));
        assert!(matches!(
            rs.validate_sl2(&x, &[w(&[1, 0])]),
            Err(RootSysError::GradingMismatch(_))
        ));
    }

    #[test]
    fn grading_for_principal_b2() {
        let rs = RootSystem::from_label("B2").unwrap();
        assert_eq!(rs.grading_for(&[w(&[1, 0]), w(&[0, 1])]).unwrap(), w(&[2, 3]));
    }

    #[test]
    fn lattice_trivial_cases() {
        let rs = RootSystem::from_label("B2").unwrap();
        assert_eq!(rs.enumerate_lattice(&Weight::zero(2), int(1), int(0)), vec![Weight::zero(2)]);
        let shift = &rs.rho_bar - &rs.theta;
        assert_eq!(rs.norm_sq(&shift), rat(1, 2));
        assert_eq!(rs.enumerate_lattice(&shift, int(2), rat(1, 2)), vec![Weight::zero(2)]);
        assert!(rs.enumerate_lattice(&shift, int(2), int(-1)).is_empty());
    }

    #[test]
    fn root_pairs_b2_d4() {
        for l in ["B2", "D4"] {
            let rs = RootSystem::from_label(l).unwrap();
            assert!(root_pair_check(&rs).unwrap().passed());
        }
    }

    #[test]
    fn affine_pairing() {
        let rs = RootSystem::from_label("B2").unwrap();
        let l0 = AffineWeight::lambda0(2);
        let d = AffineWeight::delta(2);
        assert_eq!(rs.inner_affine(&l0.add(&d), &l0).unwrap(), int(1));
        assert_eq!(rs.inner_affine(&l0, &l0).unwrap(), int(0));
        assert_eq!(rs.inner_affine(&d, &d).unwrap(), int(0));
    }
}
