//! Class membership machinery: finite Herglotz measures, the classes a
//! computation targets, and the catalog of extremal functions.
//!
//! Members of every representable class are generated from a finite atomic
//! probability measure on [0, 2pi).  Extreme points of the underlying
//! integral representations are point masses, and the functional is affine
//! in the measure once the other factors are fixed, so atomic measures are
//! the right sampling space.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{coeff_a, coeff_b, coeff_c};
use crate::error::{Error, Result};
use crate::series::{alexander, div_trunc, rotate, CoefficientSeries};

/// Absolute tolerance for weight sums and symmetry dust.
const MEASURE_TOL: f64 = 1e-12;
/// Angle tolerance used when matching an atom with its mirror image.
const ANGLE_TOL: f64 = 1e-9;

/// One point mass: weight `w` at angle `t` (radians in [0, 2pi)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "w")]
    pub weight: f64,
    #[serde(rename = "t")]
    pub angle: f64,
}

/// A finite point-mass probability measure on [0, 2pi).
///
/// `symmetric` records invariance under t -> 2pi - t; angles 0 and pi are
/// self-paired.  Symmetric measures generate real Caratheodory coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    symmetric: bool,
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

impl AtomicMeasure {
    /// Build a measure from (weight, angle) pairs.  Angles are reduced mod
    /// 2pi; weights must be nonnegative and sum to 1 within 1e-12.
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(w, t)| Atom {
                weight: w,
                angle: t.rem_euclid(TAU),
            })
            .collect();
        let measure = Self {
            atoms,
            symmetric: false,
        };
        measure.validate_weights()?;
        Ok(measure)
    }

    /// Build a measure flagged symmetric; fails if the atoms do not pair up
    /// under t -> 2pi - t.
    pub fn new_symmetric(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut measure = Self::new(atoms)?;
        if !measure.pairs_under_reflection() {
            return Err(Error::AsymmetricMeasure);
        }
        measure.symmetric = true;
        Ok(measure)
    }

    /// Build from parsed atoms, auto-detecting symmetry (used for measure
    /// files, which carry no symmetry flag).
    pub fn from_atoms_auto(atoms: Vec<Atom>) -> Result<Self> {
        let measure = Self::new(atoms.into_iter().map(|a| (a.weight, a.angle)))?;
        if measure.pairs_under_reflection() {
            let mut m = measure;
            m.symmetric = true;
            Ok(m)
        } else {
            Ok(measure)
        }
    }

    /// The unit point mass at angle t.
    pub fn point_mass(t: f64) -> Self {
        let angle = t.rem_euclid(TAU);
        let symmetric = circular_distance(angle, 0.0) <= ANGLE_TOL
            || circular_distance(angle, std::f64::consts::PI) <= ANGLE_TOL;
        Self {
            atoms: vec![Atom { weight: 1.0, angle }],
            symmetric,
        }
    }

    /// Equal weights on the given angles.
    pub fn uniform(angles: &[f64]) -> Result<Self> {
        let w = 1.0 / angles.len() as f64;
        let mut atoms: Vec<(f64, f64)> = angles.iter().map(|&t| (w, t)).collect();
        // Make the weights sum to exactly 1 regardless of the division.
        if let Some(last) = atoms.last_mut() {
            last.0 = 1.0 - w * (angles.len() - 1) as f64;
        }
        Self::new(atoms)
    }

    fn validate_weights(&self) -> Result<()> {
        for (index, atom) in self.atoms.iter().enumerate() {
            if atom.weight < 0.0 {
                return Err(Error::NegativeWeight {
                    index,
                    weight: atom.weight,
                });
            }
        }
        let sum: f64 = self.atoms.iter().map(|a| a.weight).sum();
        if (sum - 1.0).abs() > MEASURE_TOL {
            return Err(Error::WeightSum { sum });
        }
        Ok(())
    }

    fn weight_near(&self, angle: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| circular_distance(a.angle, angle) <= ANGLE_TOL)
            .map(|a| a.weight)
            .sum()
    }

    fn pairs_under_reflection(&self) -> bool {
        self.atoms.iter().all(|a| {
            let mirrored = (TAU - a.angle).rem_euclid(TAU);
            (self.weight_near(a.angle) - self.weight_near(mirrored)).abs() <= MEASURE_TOL
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Moment sigma_k = sum_j w_j e^{i k t_j} for k = 0..=k_max.
    pub(crate) fn moments(&self, k_max: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); k_max + 1];
        for atom in &self.atoms {
            let rot = Complex64::from_polar(1.0, atom.angle);
            let mut cur = Complex64::new(atom.weight, 0.0);
            out[0] += cur;
            for slot in out.iter_mut().skip(1) {
                cur *= rot;
                *slot += cur;
            }
        }
        out
    }
}

/// Truncated coefficients c_1..c_N of p(z) = 1 + sum c_n z^n with
/// Re p > 0 (when produced from a measure).  `real_only` marks members of
/// the real-coefficient subclass.
///
/// Arbitrary coefficients are constructible on purpose: the positivity
/// checks in `verify` need non-members to reject.
#[derive(Debug, Clone, PartialEq)]
pub struct CaratheodorySeries {
    coeffs: Vec<Complex64>,
    real_only: bool,
}

impl CaratheodorySeries {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self {
            coeffs,
            real_only: false,
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            real_only: true,
        }
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient c_n, 1-based.
    pub fn coeff(&self, n: usize) -> Result<Complex64> {
        if n == 0 || n > self.coeffs.len() {
            return Err(Error::TruncationTooShort {
                required: n,
                actual: self.coeffs.len(),
            });
        }
        Ok(self.coeffs[n - 1])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn real_only(&self) -> bool {
        self.real_only
    }
}

/// Caratheodory coefficients of the Herglotz transform of a measure:
/// c_n = 2 sum_j w_j e^{i n t_j}.
///
/// For symmetric measures the imaginary parts cancel analytically; the
/// numerical dust (must be <= 1e-12) is zeroed rather than reported.
pub fn caratheodory_from_measure(measure: &AtomicMeasure, n_max: usize) -> Result<CaratheodorySeries> {
    let moments = measure.moments(n_max);
    let mut coeffs: Vec<Complex64> = moments[1..].iter().map(|&s| 2.0 * s).collect();
    if measure.is_symmetric() {
        let dust = coeffs.iter().fold(0.0f64, |a, c| a.max(c.im.abs()));
        if dust > MEASURE_TOL {
            return Err(Error::ImaginaryResidue(dust));
        }
        for c in &mut coeffs {
            c.im = 0.0;
        }
        Ok(CaratheodorySeries {
            coeffs,
            real_only: true,
        })
    } else {
        Ok(CaratheodorySeries {
            coeffs,
            real_only: false,
        })
    }
}

/// Which function class (with its order parameter) a computation targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassSpec {
    /// Closed convex hull of starlike functions of order alpha (alpha < 1).
    StarlikeHull { alpha: f64 },
    /// Closed convex hull of convex functions of order alpha (alpha < 1).
    ConvexHull { alpha: f64 },
    /// Re f'(z) > beta (beta < 1).
    R { beta: f64 },
    /// Re (f(z)/z) > beta (beta < 1).
    FOverZ { beta: f64 },
    /// Typically real functions.
    TypicallyReal,
    /// Univalent functions with real coefficients.
    SReal,
    /// Re ((1-z) f'(z)) > beta (beta < 1).
    F1 { beta: f64 },
    /// Re ((1-z^2) f'(z)) > beta (beta < 1).
    F2 { beta: f64 },
}

impl ClassSpec {
    /// Canonical class identifier.
    pub fn name(&self) -> &'static str {
        match self {
            ClassSpec::StarlikeHull { .. } => "starlike_hull",
            ClassSpec::ConvexHull { .. } => "convex_hull",
            ClassSpec::R { .. } => "R",
            ClassSpec::FOverZ { .. } => "f_over_z",
            ClassSpec::TypicallyReal => "typically_real",
            ClassSpec::SReal => "S_real",
            ClassSpec::F1 { .. } => "F1",
            ClassSpec::F2 { .. } => "F2",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            ClassSpec::StarlikeHull { alpha } | ClassSpec::ConvexHull { alpha } => Some(*alpha),
            _ => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            ClassSpec::R { beta }
            | ClassSpec::FOverZ { beta }
            | ClassSpec::F1 { beta }
            | ClassSpec::F2 { beta } => Some(*beta),
            _ => None,
        }
    }

    /// Check the order parameter is strictly below 1.
    pub fn validate(&self) -> Result<()> {
        if let Some(alpha) = self.alpha() {
            if alpha >= 1.0 {
                return Err(Error::InvalidParameter {
                    name: "alpha",
                    requirement: "< 1",
                    value: alpha,
                });
            }
        }
        if let Some(beta) = self.beta() {
            if beta >= 1.0 {
                return Err(Error::InvalidParameter {
                    name: "beta",
                    requirement: "< 1",
                    value: beta,
                });
            }
        }
        Ok(())
    }

    /// Whether members can be generated from an atomic measure.
    pub fn has_representation(&self) -> bool {
        !matches!(self, ClassSpec::SReal)
    }

    /// Whether generation needs a symmetric measure.
    pub fn needs_symmetric_measure(&self) -> bool {
        matches!(self, ClassSpec::TypicallyReal)
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.alpha(), self.beta()) {
            (Some(a), _) => write!(f, "{}(alpha={})", self.name(), a),
            (_, Some(b)) => write!(f, "{}(beta={})", self.name(), b),
            _ => f.write_str(self.name()),
        }
    }
}

/// Generate the coefficient series of the class member represented by
/// `measure`, truncated at order `n_max`.
pub fn series_from_measure(
    spec: &ClassSpec,
    measure: &AtomicMeasure,
    n_max: usize,
) -> Result<CoefficientSeries> {
    spec.validate()?;
    if n_max < 2 {
        return Err(Error::OrderTooSmall {
            required: 2,
            got: n_max,
        });
    }
    match spec {
        ClassSpec::StarlikeHull { alpha } => {
            let moments = measure.moments(n_max - 1);
            CoefficientSeries::from_fn(n_max, |n| {
                coeff_a(n, *alpha).expect("alpha validated") * moments[n - 1]
            })
        }
        ClassSpec::ConvexHull { alpha } => {
            let starlike = series_from_measure(&ClassSpec::StarlikeHull { alpha: *alpha }, measure, n_max)?;
            Ok(alexander(&starlike))
        }
        ClassSpec::R { beta } => {
            let moments = measure.moments(n_max - 1);
            CoefficientSeries::from_fn(n_max, |n| {
                2.0 * (1.0 - beta) / n as f64 * moments[n - 1]
            })
        }
        ClassSpec::FOverZ { beta } => {
            let c = caratheodory_from_measure(measure, n_max - 1)?;
            CoefficientSeries::from_fn(n_max, |n| (1.0 - beta) * c.coeffs()[n - 2])
        }
        ClassSpec::TypicallyReal => {
            if !measure.is_symmetric() {
                return Err(Error::SymmetryRequired);
            }
            let c = caratheodory_from_measure(measure, n_max.saturating_sub(1))?;
            // a_{2k} = c_1 + c_3 + ... + c_{2k-1};  a_{2k+1} = 1 + c_2 + ... + c_{2k}.
            let mut odd_sum = 0.0;
            let mut even_sum = 0.0;
            let mut coeffs = Vec::with_capacity(n_max);
            coeffs.push(Complex64::new(1.0, 0.0));
            for n in 2..=n_max {
                let cn1 = c.coeffs()[n - 2].re;
                if n % 2 == 0 {
                    odd_sum += cn1;
                    coeffs.push(Complex64::new(odd_sum, 0.0));
                } else {
                    even_sum += cn1;
                    coeffs.push(Complex64::new(1.0 + even_sum, 0.0));
                }
            }
            CoefficientSeries::new(coeffs)
        }
        ClassSpec::SReal => Err(Error::UnsupportedClass("S_real".into())),
        ClassSpec::F1 { beta } => {
            let c = caratheodory_from_measure(measure, n_max - 1)?;
            let mut prefix = Complex64::new(0.0, 0.0);
            let mut coeffs = Vec::with_capacity(n_max);
            coeffs.push(Complex64::new(1.0, 0.0));
            for n in 2..=n_max {
                prefix += c.coeffs()[n - 2];
                coeffs.push((1.0 + (1.0 - beta) * prefix) / n as f64);
            }
            CoefficientSeries::new(coeffs)
        }
        ClassSpec::F2 { beta } => {
            let c = caratheodory_from_measure(measure, n_max - 1)?;
            let mut odd_sum = Complex64::new(0.0, 0.0);
            let mut even_sum = Complex64::new(0.0, 0.0);
            let mut coeffs = Vec::with_capacity(n_max);
            coeffs.push(Complex64::new(1.0, 0.0));
            for n in 2..=n_max {
                let cn1 = c.coeffs()[n - 2];
                if n % 2 == 0 {
                    odd_sum += cn1;
                    coeffs.push((1.0 - beta) * odd_sum / n as f64);
                } else {
                    even_sum += cn1;
                    coeffs.push((1.0 + (1.0 - beta) * even_sum) / n as f64);
                }
            }
            CoefficientSeries::new(coeffs)
        }
    }
}

/// Identifier (with parameters) of a cataloged extremal function.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtremalId {
    /// z/(1-z)^{2(1-alpha)}: coefficients A_n.
    F1Starlike { alpha: f64 },
    /// Its Alexander transform: coefficients A_n/n.
    F2Convex { alpha: f64 },
    /// (1-beta) integral of (1+t)/(1-t) plus beta z: a_n = 2(1-beta)/n.
    F0R { beta: f64 },
    /// The k-th power variant: a_n = 2(1-beta)/n when k | (n-1), else 0.
    F0RPower { beta: f64, order: usize },
    /// z/(1-z)^2: a_n = n.
    Koebe,
    /// z(1+z^2)/(1-z^2)^2: odd coefficients n, even 0.
    TrOdd,
    /// 2(1-beta)z/(1-z) + (1-2 beta) log(1-z): coefficients B_n.
    F1BetaF1 { beta: f64 },
    /// z(1-beta)/(1-z^2) + (beta/2) log((1+z)/(1-z)).
    F2BetaF2 { beta: f64 },
    /// z(1-beta)/(1-z) + (beta/2) log((1+z)/(1-z)): coefficients C_n.
    F3F2 { beta: f64 },
    /// Convex combination of rotations of a base extremal.
    Mixture {
        weights: Vec<f64>,
        angles: Vec<f64>,
        base: Box<ExtremalSpec>,
    },
}

impl ExtremalId {
    pub fn name(&self) -> &'static str {
        match self {
            ExtremalId::F1Starlike { .. } => "f1_starlike",
            ExtremalId::F2Convex { .. } => "f2_convex",
            ExtremalId::F0R { .. } => "f0_R",
            ExtremalId::F0RPower { .. } => "f0_R_power",
            ExtremalId::Koebe => "koebe",
            ExtremalId::TrOdd => "tr_odd",
            ExtremalId::F1BetaF1 { .. } => "f1beta_F1",
            ExtremalId::F2BetaF2 { .. } => "f2beta_F2",
            ExtremalId::F3F2 { .. } => "f3_F2",
            ExtremalId::Mixture { .. } => "mixture",
        }
    }
}

/// An extremal function plus an outer rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSpec {
    pub id: ExtremalId,
    pub rotation: f64,
}

impl ExtremalSpec {
    pub fn new(id: ExtremalId) -> Self {
        Self { id, rotation: 0.0 }
    }

    pub fn with_rotation(id: ExtremalId, rotation: f64) -> Self {
        Self { id, rotation }
    }

    /// The 2(n-1)-component mixture with angles (2k+1) pi / (2n-2) and equal
    /// weights, which attains the first-branch hull bound when m = n.
    pub fn canonical_mixture(n: usize, base: ExtremalSpec) -> Self {
        let count = 2 * (n - 1);
        let weights = vec![1.0 / count as f64; count];
        let angles = (1..=count)
            .map(|k| (2 * k + 1) as f64 * std::f64::consts::PI / (2 * n - 2) as f64)
            .collect();
        Self::new(ExtremalId::Mixture {
            weights,
            angles,
            base: Box::new(base),
        })
    }
}

impl fmt::Display for ExtremalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.id {
            ExtremalId::F1Starlike { alpha } | ExtremalId::F2Convex { alpha } => {
                write!(f, "{}(alpha={})", self.id.name(), alpha)?;
            }
            ExtremalId::F0RPower { beta, order } => {
                write!(f, "{}(beta={}, k={})", self.id.name(), beta, order)?;
            }
            ExtremalId::F0R { beta }
            | ExtremalId::F1BetaF1 { beta }
            | ExtremalId::F2BetaF2 { beta }
            | ExtremalId::F3F2 { beta } => {
                write!(f, "{}(beta={})", self.id.name(), beta)?;
            }
            ExtremalId::Mixture { weights, base, .. } => {
                write!(f, "mixture({} parts of {})", weights.len(), base)?;
            }
            _ => f.write_str(self.id.name())?,
        }
        if self.rotation != 0.0 {
            write!(f, " rotated by {}", self.rotation)?;
        }
        Ok(())
    }
}

fn check_order_param(beta: f64) -> Result<()> {
    if beta >= 1.0 {
        Err(Error::InvalidParameter {
            name: "beta",
            requirement: "< 1",
            value: beta,
        })
    } else {
        Ok(())
    }
}

/// Closed-form coefficient series of a cataloged extremal, truncated at
/// `n_max` and post-composed with the spec's rotation.
pub fn extremal_series(spec: &ExtremalSpec, n_max: usize) -> Result<CoefficientSeries> {
    let base = match &spec.id {
        ExtremalId::F1Starlike { alpha } => {
            let mut coeffs = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                coeffs.push(Complex64::new(coeff_a(n, *alpha)?, 0.0));
            }
            CoefficientSeries::new(coeffs)?
        }
        ExtremalId::F2Convex { alpha } => {
            let mut coeffs = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                coeffs.push(Complex64::new(coeff_a(n, *alpha)? / n as f64, 0.0));
            }
            CoefficientSeries::new(coeffs)?
        }
        ExtremalId::F0R { beta } => {
            check_order_param(*beta)?;
            CoefficientSeries::from_fn(n_max, |n| {
                Complex64::new(2.0 * (1.0 - beta) / n as f64, 0.0)
            })?
        }
        ExtremalId::F0RPower { beta, order } => {
            check_order_param(*beta)?;
            if *order < 1 {
                return Err(Error::InvalidParameter {
                    name: "order",
                    requirement: ">= 1",
                    value: *order as f64,
                });
            }
            let k = *order;
            CoefficientSeries::from_fn(n_max, |n| {
                if (n - 1) % k == 0 {
                    Complex64::new(2.0 * (1.0 - beta) / n as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })?
        }
        ExtremalId::Koebe => CoefficientSeries::from_fn(n_max, |n| Complex64::new(n as f64, 0.0))?,
        ExtremalId::TrOdd => CoefficientSeries::from_fn(n_max, |n| {
            if n % 2 == 1 {
                Complex64::new(n as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })?,
        ExtremalId::F1BetaF1 { beta } => {
            let mut coeffs = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                coeffs.push(Complex64::new(coeff_b(n, *beta)?, 0.0));
            }
            CoefficientSeries::new(coeffs)?
        }
        ExtremalId::F2BetaF2 { beta } => {
            check_order_param(*beta)?;
            f2beta_by_series_algebra(*beta, n_max)?
        }
        ExtremalId::F3F2 { beta } => {
            let mut coeffs = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                coeffs.push(Complex64::new(coeff_c(n, *beta)?, 0.0));
            }
            CoefficientSeries::new(coeffs)?
        }
        ExtremalId::Mixture {
            weights,
            angles,
            base,
        } => mixture_series(weights, angles, base, n_max)?,
    };
    Ok(rotate(&base, spec.rotation))
}

/// z(1-beta)/(1-z^2) + (beta/2) log((1+z)/(1-z)), built by truncated series
/// algebra (convolution division plus the log series) instead of a
/// hand-derived closed form.
fn f2beta_by_series_algebra(beta: f64, n_max: usize) -> Result<CoefficientSeries> {
    let len = n_max + 1; // powers 0..=n_max
    let z_over = div_trunc(&[0.0, 1.0], &[1.0, 0.0, -1.0], len);
    // log((1+z)/(1-z)) = log(1+z) - log(1-z), coefficient at z^k:
    // (-1)^{k+1}/k + 1/k.
    let mut log_ratio = vec![0.0; len];
    for (k, slot) in log_ratio.iter_mut().enumerate().skip(1) {
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        *slot = (sign + 1.0) / k as f64;
    }
    CoefficientSeries::from_fn(n_max, |n| {
        Complex64::new((1.0 - beta) * z_over[n] + beta / 2.0 * log_ratio[n], 0.0)
    })
}

/// Convex combination sum_k w_k e^{-i theta_k} base(e^{i theta_k} z).
///
/// The weights must lie in [0, 1] and satisfy the half-sum constraint of the
/// first-branch extremal construction: odd-position and even-position
/// weights each sum to 1/2 (positions are 1-based).
pub fn mixture_series(
    weights: &[f64],
    angles: &[f64],
    base: &ExtremalSpec,
    n_max: usize,
) -> Result<CoefficientSeries> {
    if weights.len() != angles.len() {
        return Err(Error::MixtureConstraint(format!(
            "{} weights vs {} angles",
            weights.len(),
            angles.len()
        )));
    }
    if weights.is_empty() {
        return Err(Error::MixtureConstraint("empty mixture".into()));
    }
    if let Some(&w) = weights.iter().find(|&&w| !(0.0..=1.0).contains(&w)) {
        return Err(Error::MixtureConstraint(format!(
            "weight {w} outside [0, 1]"
        )));
    }
    // weights[0] is m_1 (odd position).
    let odd: f64 = weights.iter().step_by(2).sum();
    let even: f64 = weights.iter().skip(1).step_by(2).sum();
    if (odd - 0.5).abs() > MEASURE_TOL || (even - 0.5).abs() > MEASURE_TOL {
        return Err(Error::MixtureConstraint(format!(
            "odd-position weights sum to {odd}, even-position to {even}; both must be 1/2"
        )));
    }
    let base_series = extremal_series(base, n_max)?;
    let mut acc = vec![Complex64::new(0.0, 0.0); n_max];
    for (&w, &theta) in weights.iter().zip(angles) {
        let rotated = rotate(&base_series, theta);
        for (slot, &c) in acc.iter_mut().zip(rotated.coeffs()) {
            *slot += w * c;
        }
    }
    acc[0] = Complex64::new(1.0, 0.0);
    CoefficientSeries::new(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_functional, FunctionalQuery};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn point_mass_moments_are_unimodular() {
        let c = caratheodory_from_measure(&AtomicMeasure::point_mass(0.0), 8).unwrap();
        for n in 1..=8 {
            assert!((c.coeff(n).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn two_atom_moments_alternate() {
        let m = AtomicMeasure::new_symmetric([(0.5, 0.0), (0.5, PI)]).unwrap();
        let c = caratheodory_from_measure(&m, 8).unwrap();
        for n in 1..=8 {
            let expect = if n % 2 == 0 { 2.0 } else { 0.0 };
            assert!((c.coeff(n).unwrap().re - expect).abs() < 1e-12);
            assert_eq!(c.coeff(n).unwrap().im, 0.0);
        }
    }

    #[test]
    fn quarter_roots_moments_have_period_four() {
        let m = AtomicMeasure::uniform(&[0.0, PI / 2.0, PI, 3.0 * PI / 2.0]).unwrap();
        let c = caratheodory_from_measure(&m, 12).unwrap();
        for n in 1..=12 {
            let expect = if n % 4 == 0 { 2.0 } else { 0.0 };
            assert!(
                (c.coeff(n).unwrap() - Complex64::new(expect, 0.0)).norm() < 1e-12,
                "n={n}"
            );
        }
    }

    #[test]
    fn measure_validation_errors() {
        assert!(matches!(
            AtomicMeasure::new([(0.5, 0.0), (0.6, 1.0)]),
            Err(Error::WeightSum { .. })
        ));
        assert!(matches!(
            AtomicMeasure::new([(-0.1, 0.0), (1.1, 1.0)]),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            AtomicMeasure::new_symmetric([(0.7, 1.0), (0.3, TAU - 1.0)]),
            Err(Error::AsymmetricMeasure)
        ));
    }

    #[test]
    fn starlike_point_mass_reproduces_koebe() {
        let spec = ClassSpec::StarlikeHull { alpha: 0.0 };
        let s = series_from_measure(&spec, &AtomicMeasure::point_mass(0.0), 10).unwrap();
        for n in 1..=10 {
            assert!((s.coeff(n).unwrap() - Complex64::new(n as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn r_point_mass_reproduces_f0() {
        let spec = ClassSpec::R { beta: 0.0 };
        let s = series_from_measure(&spec, &AtomicMeasure::point_mass(0.0), 10).unwrap();
        for n in 2..=10 {
            assert!((s.coeff(n).unwrap().re - 2.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn typically_real_two_atoms_gives_odd_extremal() {
        let m = AtomicMeasure::new_symmetric([(0.5, 0.0), (0.5, PI)]).unwrap();
        let s = series_from_measure(&ClassSpec::TypicallyReal, &m, 11).unwrap();
        for n in 1..=11 {
            let expect = if n % 2 == 1 { n as f64 } else { 0.0 };
            assert!((s.coeff(n).unwrap().re - expect).abs() < 1e-12, "n={n}");
            assert_eq!(s.coeff(n).unwrap().im, 0.0);
        }
    }

    #[test]
    fn typically_real_requires_symmetry() {
        let m = AtomicMeasure::new([(1.0, 1.0)]).unwrap();
        assert_eq!(
            series_from_measure(&ClassSpec::TypicallyReal, &m, 6).unwrap_err(),
            Error::SymmetryRequired
        );
    }

    #[test]
    fn s_real_has_no_representation() {
        let m = AtomicMeasure::point_mass(0.0);
        assert!(matches!(
            series_from_measure(&ClassSpec::SReal, &m, 6),
            Err(Error::UnsupportedClass(_))
        ));
    }

    #[test]
    fn convex_is_alexander_of_starlike() {
        let m = AtomicMeasure::new([(0.25, 0.3), (0.5, 2.0), (0.25, 5.1)]).unwrap();
        let alpha = 0.25;
        let star = series_from_measure(&ClassSpec::StarlikeHull { alpha }, &m, 12).unwrap();
        let conv = series_from_measure(&ClassSpec::ConvexHull { alpha }, &m, 12).unwrap();
        assert_eq!(conv, alexander(&star));
    }

    #[test]
    fn koebe_extremal_series() {
        let s = extremal_series(&ExtremalSpec::new(ExtremalId::Koebe), 5).unwrap();
        let got: Vec<f64> = s.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn log_extremal_at_alpha_half() {
        let s = extremal_series(&ExtremalSpec::new(ExtremalId::F2Convex { alpha: 0.5 }), 9).unwrap();
        for n in 1..=9 {
            assert!((s.coeff(n).unwrap().re - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn extremal_tables_match_weight_tables_exactly() {
        for &alpha in &[-1.5, 0.0, 0.5, 0.8] {
            let s = extremal_series(&ExtremalSpec::new(ExtremalId::F1Starlike { alpha }), 24).unwrap();
            for n in 1..=24 {
                assert_eq!(s.coeff(n).unwrap().re, coeff_a(n, alpha).unwrap());
                assert_eq!(s.coeff(n).unwrap().im, 0.0);
            }
        }
        for &beta in &[-2.0, 0.0, 0.5] {
            let s = extremal_series(&ExtremalSpec::new(ExtremalId::F1BetaF1 { beta }), 24).unwrap();
            let t = extremal_series(&ExtremalSpec::new(ExtremalId::F3F2 { beta }), 24).unwrap();
            for n in 1..=24 {
                assert_eq!(s.coeff(n).unwrap().re, coeff_b(n, beta).unwrap());
                assert_eq!(t.coeff(n).unwrap().re, coeff_c(n, beta).unwrap());
            }
        }
    }

    #[test]
    fn f2beta_series_algebra_matches_parity_weights() {
        for &beta in &[-1.0, 0.0, 0.3, 0.9] {
            let s = extremal_series(&ExtremalSpec::new(ExtremalId::F2BetaF2 { beta }), 16).unwrap();
            for n in 1..=16 {
                let expect = if n % 2 == 1 {
                    coeff_c(n, beta).unwrap()
                } else {
                    0.0
                };
                assert!(
                    (s.coeff(n).unwrap().re - expect).abs() < 1e-12,
                    "beta={beta} n={n}"
                );
            }
        }
    }

    #[test]
    fn singleton_mixture_is_a_rotation() {
        let base = ExtremalSpec::new(ExtremalId::F1Starlike { alpha: 0.0 });
        let theta = 1.234;
        let mixed = mixture_series(&[0.5, 0.5], &[theta, theta], &base, 8).unwrap();
        let direct = rotate(&extremal_series(&base, 8).unwrap(), theta);
        for n in 1..=8 {
            assert!((mixed.coeff(n).unwrap() - direct.coeff(n).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn canonical_mixture_n2_cancels_a2() {
        let spec = ExtremalSpec::canonical_mixture(
            2,
            ExtremalSpec::new(ExtremalId::F1Starlike { alpha: 0.0 }),
        );
        let s = extremal_series(&spec, 5).unwrap();
        assert!(s.coeff(2).unwrap().norm() < 1e-12);
        assert!((s.coeff(3).unwrap() - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
        for &lambda in &[0.0, 0.7, 1.5] {
            let q = FunctionalQuery::new(2, 2, lambda).unwrap();
            assert!((eval_functional(&s, &q).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_mixture_n3_attains_first_branch() {
        let spec = ExtremalSpec::canonical_mixture(
            3,
            ExtremalSpec::new(ExtremalId::F1Starlike { alpha: 0.0 }),
        );
        let s = extremal_series(&spec, 5).unwrap();
        for &lambda in &[0.0, 0.5, 1.0] {
            let q = FunctionalQuery::new(3, 3, lambda).unwrap();
            assert!((eval_functional(&s, &q).unwrap() - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_constraints_are_enforced() {
        let base = ExtremalSpec::new(ExtremalId::Koebe);
        assert!(matches!(
            mixture_series(&[1.0], &[0.0], &base, 5),
            Err(Error::MixtureConstraint(_))
        ));
        assert!(matches!(
            mixture_series(&[0.5, 0.5], &[0.0], &base, 5),
            Err(Error::MixtureConstraint(_))
        ));
        assert!(matches!(
            mixture_series(&[1.5, -0.5], &[0.0, 1.0], &base, 5),
            Err(Error::MixtureConstraint(_))
        ));
    }

    #[test]
    fn measure_moments_stay_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let k = rng.random_range(1..=6);
            let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let atoms: Vec<(f64, f64)> = raw
                .iter()
                .map(|&w| (w / total, rng.random::<f64>() * TAU))
                .collect();
            let m = AtomicMeasure::from_atoms_auto(
                atoms
                    .iter()
                    .map(|&(w, t)| Atom {
                        weight: w,
                        angle: t,
                    })
                    .collect(),
            )
            .unwrap();
            let c = caratheodory_from_measure(&m, 16).unwrap();
            for n in 1..=16 {
                assert!(c.coeff(n).unwrap().norm() <= 2.0 + 1e-12);
            }
        }
    }

    #[test]
    fn rotation_field_post_composes() {
        let spec = ExtremalSpec::with_rotation(ExtremalId::Koebe, PI);
        let s = extremal_series(&spec, 6).unwrap();
        for n in 1..=6 {
            let expect = n as f64 * if n % 2 == 1 { 1.0 } else { -1.0 };
            assert!((s.coeff(n).unwrap().re - expect).abs() < 1e-12);
        }
    }
}
