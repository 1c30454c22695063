//! The dispersive half-space `x < 0`.
//!
//! The medium is characterised by the Drude-type susceptibility
//! `f(ω) = iσ0 / (ω(1 - ibω))`. Everything else here (causal kernel,
//! refractive index, reflection and transmission at the vacuum interface)
//! follows from it. All response functions reject `ω = 0`, where `f` has a
//! simple pole; the corresponding limits live in the `*_limit` helpers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{principal_value, QuadratureConfig};

/// A complex response value: `f`, `ε = 1 + f`, `n`, `R` or `T`.
pub type ComplexResponse = Complex64;

/// Strength `σ0` (inverse length) and relaxation length `b` of the medium.
///
/// `σ0 = 0` is accepted and describes an empty half-space; it is the
/// degenerate case in which every reflection-dependent quantity vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    sigma0: f64,
    b: f64,
}

impl DrudeParams {
    pub fn new(sigma0: f64, b: f64) -> Result<Self> {
        if !(sigma0 >= 0.0 && sigma0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must be finite and >= 0, got {sigma0}"
            )));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("b must be finite and > 0, got {b}")));
        }
        Ok(Self { sigma0, b })
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_vacuum(&self) -> bool {
        self.sigma0 == 0.0
    }
}

fn reject_zero(quantity: &'static str, omega: f64) -> Result<()> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain {
            quantity,
            parameter: "omega",
            value: omega,
        });
    }
    Ok(())
}

fn susceptibility(omega: f64, p: &DrudeParams) -> Complex64 {
    Complex64::new(0.0, p.sigma0) / (omega * Complex64::new(1.0, -p.b * omega))
}

/// Which root of `n² = 1 + f(ω)` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// `Im n ≥ 0` for `ω > 0`: the transmitted wave `e^{-iωnx}` decays into
    /// the medium.
    #[default]
    Physical,
    /// The opposite root. Only useful as a negative control.
    Flipped,
}

fn index_on_branch(omega: f64, p: &DrudeParams, branch: Branch) -> Complex64 {
    let mut n = (1.0 + susceptibility(omega, p)).sqrt();
    // The principal root already satisfies this for the Drude model; the
    // explicit selection guards the invariant rather than assuming it.
    if (omega > 0.0 && n.im < 0.0) || (omega < 0.0 && n.im > 0.0) {
        n = -n;
    }
    match branch {
        Branch::Physical => n,
        Branch::Flipped => -n,
    }
}

/// Below this value of `|ω|b` the reflection coefficient is evaluated from
/// `1/n` instead of `n`.
const SMALL_FREQUENCY: f64 = 1e-8;

fn reflection_on_branch(omega: f64, p: &DrudeParams, branch: Branch) -> Complex64 {
    if p.is_vacuum() {
        return Complex64::new(0.0, 0.0);
    }
    if (omega * p.b).abs() < SMALL_FREQUENCY && branch == Branch::Physical {
        // |n| ~ sqrt(σ0/ω) is huge here; work with u = 1/n = sqrt(1/(1+f)).
        let d = omega * Complex64::new(1.0, -p.b * omega);
        let mut u = (d / (d + Complex64::new(0.0, p.sigma0))).sqrt();
        if (omega > 0.0 && u.im > 0.0) || (omega < 0.0 && u.im < 0.0) {
            u = -u;
        }
        return (u - 1.0) / (u + 1.0);
    }
    let f = susceptibility(omega, p);
    let n = index_on_branch(omega, p, branch);
    // (1 - n)/(1 + n) = -f/(1 + n)², free of the 1 - n cancellation at high ω.
    -f / ((1.0 + n) * (1.0 + n))
}

/// Susceptibility `f(ω) = iσ0 / (ω(1 - ibω))`.
pub fn f_omega(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    reject_zero("susceptibility f(omega)", omega)?;
    Ok(susceptibility(omega, p))
}

/// Permittivity `ε = 1 + f(ω)` of the medium.
pub fn permittivity(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    Ok(1.0 + f_omega(omega, p)?)
}

/// Causal response kernel `χ(t) = Θ(t) σ0 (1 - e^{-t/b})`, the inverse
/// Fourier transform of `f` with the zero-frequency pole taken just below
/// the real axis.
pub fn chi_time(t: f64, p: &DrudeParams) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    -p.sigma0 * (-t / p.b).exp_m1()
}

/// Refractive index `n = sqrt(1 + f(ω))` on the physical branch.
pub fn refractive_index(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    refractive_index_on_branch(omega, p, Branch::Physical)
}

pub fn refractive_index_on_branch(omega: f64, p: &DrudeParams, branch: Branch) -> Result<ComplexResponse> {
    reject_zero("refractive index", omega)?;
    Ok(index_on_branch(omega, p, branch))
}

/// Reflection coefficient `R = (1 - n)/(1 + n)` for a wave arriving from
/// the vacuum side.
pub fn reflection(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    reject_zero("reflection coefficient", omega)?;
    Ok(reflection_on_branch(omega, p, Branch::Physical))
}

/// Transmission coefficient `T = 2n/(1 + n)`.
pub fn transmission(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    reject_zero("transmission coefficient", omega)?;
    let n = index_on_branch(omega, p, Branch::Physical);
    Ok(2.0 * n / (1.0 + n))
}

/// Mass of the in-medium high-frequency modes, `sqrt(σ0/b)`.
pub fn effective_mass(p: &DrudeParams) -> f64 {
    (p.sigma0 / p.b).sqrt()
}

/// `ω²n² - ω² = ω² f(ω)`, which tends to `-σ0/b` (minus the squared
/// effective mass) as `ω → ∞`.
pub fn dispersion_shift(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    Ok(omega * omega * f_omega(omega, p)?)
}

/// `R + 1 = 2/(1 + n)`, the departure from perfect reflection. Tends to
/// zero as `ω → 0`.
pub fn reflection_low_frequency_defect(omega: f64, p: &DrudeParams) -> Result<ComplexResponse> {
    reject_zero("reflection defect", omega)?;
    if p.is_vacuum() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(2.0 / (1.0 + index_on_branch(omega, p, Branch::Physical)))
}

/// Leading high-frequency behaviour `R ≈ σ0 / (4bω²)`.
pub fn reflection_high_frequency_limit(omega: f64, p: &DrudeParams) -> f64 {
    p.sigma0 / (4.0 * p.b * omega * omega)
}

/// Leading low-frequency magnitude `|n| ≈ sqrt(σ0/|ω|)`.
pub fn refractive_index_low_frequency_limit(omega: f64, p: &DrudeParams) -> f64 {
    (p.sigma0 / omega.abs()).sqrt()
}

/// `|Re f(ω) - H[Im f](ω)|` on a grid of positive frequencies, where `H`
/// is the Hilbert transform evaluated as a numerical principal value.
///
/// `Im f` is odd in `ω`, so the transform folds onto the positive axis:
/// `H[Im f](ω) = (2/π) PV ∫_0^∞ s Im f(s) / (s² - ω²) ds`.
pub fn kramers_kronig_residual(omega_grid: &[f64], p: &DrudeParams, quad: &QuadratureConfig) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(omega_grid.len());
    let mut previous = 0.0;
    for &omega in omega_grid {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Kramers-Kronig grid must be positive, got {omega}"
            )));
        }
        if omega < previous {
            return Err(Error::InvalidParameter("Kramers-Kronig grid must be sorted".into()));
        }
        previous = omega;
        if p.is_vacuum() {
            out.push(0.0);
            continue;
        }
        let numerator = |s: f64| s * susceptibility(s, p).im;
        let g = |s: f64| std::f64::consts::FRAC_2_PI * numerator(s) / ((s + omega) * (s - omega));
        let hilbert = principal_value(g, omega, 0.0, f64::INFINITY, quad)
            .map_err(|e| e.at(format!("Kramers-Kronig residual at omega = {omega}")))?;
        out.push((susceptibility(omega, p).re - hilbert.value).abs());
    }
    Ok(out)
}

/// High-frequency envelope of a reflection coefficient, used to bound the
/// tails of Fourier integrals: `|Re R| ≲ c_re/ω^p_re` and
/// `|Im R| ≲ c_im/ω^p_im`. `None` marks a part that vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionAsymptote {
    pub re: Option<(f64, f64)>,
    pub im: Option<(f64, f64)>,
}

/// Anything that reflects plane waves arriving from the vacuum side.
pub trait Reflectivity: Sync {
    /// `R(ω)` for real `ω ≠ 0`. Callers guarantee `ω ≠ 0`.
    fn reflect(&self, omega: f64) -> Complex64;

    fn asymptote(&self) -> ReflectionAsymptote;

    /// True when `R ≡ 0`.
    fn is_transparent(&self) -> bool {
        false
    }
}

impl Reflectivity for DrudeParams {
    fn reflect(&self, omega: f64) -> Complex64 {
        reflection_on_branch(omega, self, Branch::Physical)
    }

    fn asymptote(&self) -> ReflectionAsymptote {
        // Re R ≈ σ0/(4bω²), Im R ≈ -σ0/(4b²ω³).
        ReflectionAsymptote {
            re: Some((self.sigma0 / (4.0 * self.b), 2.0)),
            im: Some((self.sigma0 / (4.0 * self.b * self.b), 3.0)),
        }
    }

    fn is_transparent(&self) -> bool {
        self.is_vacuum()
    }
}

/// The ideal Dirichlet mirror, `R ≡ -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PerfectMirror;

impl Reflectivity for PerfectMirror {
    fn reflect(&self, _omega: f64) -> Complex64 {
        Complex64::new(-1.0, 0.0)
    }

    fn asymptote(&self) -> ReflectionAsymptote {
        ReflectionAsymptote {
            re: Some((1.0, 0.0)),
            im: None,
        }
    }
}

/// A Drude medium whose index is taken on a selectable root. With
/// [`Branch::Flipped`] the reflection coefficient becomes `1/R`, which is
/// unbounded at high frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedMedium {
    pub params: DrudeParams,
    pub branch: Branch,
}

impl Reflectivity for BranchedMedium {
    fn reflect(&self, omega: f64) -> Complex64 {
        reflection_on_branch(omega, &self.params, self.branch)
    }

    fn asymptote(&self) -> ReflectionAsymptote {
        match self.branch {
            Branch::Physical => self.params.asymptote(),
            // 1/R ≈ 4bω²/σ0: report the true growth so tail bounds are honest.
            Branch::Flipped => ReflectionAsymptote {
                re: Some((4.0 * self.params.b / self.params.sigma0.max(f64::MIN_POSITIVE), -2.0)),
                im: Some((4.0 / self.params.sigma0.max(f64::MIN_POSITIVE), -1.0)),
            },
        }
    }

    fn is_transparent(&self) -> bool {
        self.params.is_vacuum()
    }
}
