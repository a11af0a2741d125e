//! Hartle-Hawking vacuum and one-particle states in the Boulware ⊗
//! anti-Boulware basis, and the maximally entangled Alice–Rob states.
//!
//! Scalar states are infinite two-mode squeezed series and must be truncated;
//! the truncation here is *certified*, not heuristic: closed-form
//! geometric-series tail bounds pick the smallest occupation cutoff that
//! meets a requested tolerance, and the discarded probability mass is carried
//! along as [`ScalarTruncation::tail_bound`]. Dirac states are exact on a
//! four-dimensional mode space.
//!
//! All overall phases are fixed to +1; the only negative amplitude anywhere
//! is the `- sin q_d` term of the Dirac spin-down expansion, which is forced
//! by operator anticommutation bookkeeping.

use num_complex::Complex64;

use crate::fock::{SubsystemDims, TripartiteState};
use crate::{Error, Result};

/// Hard cap on the scalar occupation cutoff. Tolerances that would need more
/// are reported as infeasible rather than silently degraded.
pub const NMAX_CAP: usize = 4096;

/// A certified scalar truncation: the highest Boulware occupation kept, a
/// rigorous upper bound on the discarded probability mass, and the tolerance
/// that was requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarTruncation {
    pub n_max: usize,
    /// max(vacuum tail, one-particle tail) at `n_max`; ≤ `tolerance` when
    /// produced by [`choose_nmax`].
    pub tail_bound: f64,
    pub tolerance: f64,
}

impl ScalarTruncation {
    /// Truncation at an explicitly chosen `n_max` (used by convergence
    /// rechecks and by cap-degraded sweep rows). The tail bound is still the
    /// rigorous closed form; `tolerance` records what was asked for.
    pub fn with_nmax(n_max: usize, tanh_qs: f64, tolerance: f64) -> Self {
        ScalarTruncation {
            n_max,
            tail_bound: vacuum_tail(tanh_qs, n_max).max(one_particle_tail(tanh_qs, n_max)),
            tolerance,
        }
    }
}

/// Discarded probability mass of the truncated vacuum:
/// Σ_{n>N} tanh²ⁿq / cosh²q = tanh^{2(N+1)} q (geometric series).
pub fn vacuum_tail(tanh_qs: f64, n_max: usize) -> f64 {
    let x = tanh_qs * tanh_qs;
    x.powi(n_max as i32 + 1)
}

/// Discarded probability mass of the truncated one-particle state.
///
/// The squared amplitudes are (n+1)(1-x)² xⁿ with x = tanh²q, so the tail is
///   (1-x)² Σ_{n>N} (n+1) xⁿ
///     = (1-x)² x^{N+1} [ (N+2)/(1-x) + x/(1-x)² ]
///     = x^{N+1} [ (N+2)(1-x) + x ]
///     = (N+2) x^{N+1} - (N+1) x^{N+2},
/// using Σ_{n≥0} (n+1)xⁿ = 1/(1-x)² and the index shift n = N+1+m. This is
/// exact, not just a bound.
pub fn one_particle_tail(tanh_qs: f64, n_max: usize) -> f64 {
    let x = tanh_qs * tanh_qs;
    let n = n_max as f64;
    x.powi(n_max as i32 + 1) * ((n + 2.0) * (1.0 - x) + x)
}

/// Smallest `n_max` such that both the vacuum tail and the one-particle tail
/// fall below `tolerance`, capped at [`NMAX_CAP`].
pub fn choose_nmax(tanh_qs: f64, tolerance: f64) -> Result<ScalarTruncation> {
    if !(0.0..1.0).contains(&tanh_qs) {
        return Err(Error::HorizonLimit(format!(
            "tanh q_s = {tanh_qs} must lie in [0, 1); the Fock series does not \
             truncate at the horizon"
        )));
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be > 0, got {tolerance}"
        )));
    }
    if tanh_qs == 0.0 {
        return Ok(ScalarTruncation {
            n_max: 0,
            tail_bound: 0.0,
            tolerance,
        });
    }
    let x = tanh_qs * tanh_qs;
    // The one-particle tail dominates; start from the vacuum-tail estimate
    // and scan forward. Both tails are strictly decreasing in n_max.
    let mut n = ((tolerance.ln() / x.ln()).floor().max(0.0) as usize).saturating_sub(1);
    while n > 0 && one_particle_tail(tanh_qs, n - 1) <= tolerance && vacuum_tail(tanh_qs, n - 1) <= tolerance
    {
        n -= 1;
    }
    while one_particle_tail(tanh_qs, n) > tolerance || vacuum_tail(tanh_qs, n) > tolerance {
        n += 1;
        if n > NMAX_CAP {
            return Err(Error::TruncationInfeasible {
                tanh_qs,
                tolerance,
                cap: NMAX_CAP,
            });
        }
    }
    Ok(ScalarTruncation {
        n_max: n,
        tail_bound: vacuum_tail(tanh_qs, n).max(one_particle_tail(tanh_qs, n)),
        tolerance,
    })
}

/// A two-mode (Rob ⊗ AntiRob) amplitude array, row-major in (r, r̄).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub dim_r: usize,
    pub dim_rbar: usize,
    pub amplitudes: Vec<Complex64>,
}

impl TwoModeState {
    fn zeros(dim_r: usize, dim_rbar: usize) -> Self {
        TwoModeState {
            dim_r,
            dim_rbar,
            amplitudes: vec![Complex64::ZERO; dim_r * dim_rbar],
        }
    }

    pub fn amplitude(&self, r: usize, rbar: usize) -> Complex64 {
        self.amplitudes[r * self.dim_rbar + rbar]
    }

    fn set(&mut self, r: usize, rbar: usize, v: f64) {
        self.amplitudes[r * self.dim_rbar + rbar] = Complex64::new(v, 0.0);
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// cosh q from tanh q.
fn cosh_from_tanh(t: f64) -> f64 {
    1.0 / (1.0 - t * t).sqrt()
}

/// Truncated Hartle-Hawking vacuum for a scalar mode in the Boulware basis:
/// amplitude tanhⁿq / cosh q at (n, n) for n ≤ n_max.
///
/// Both mode dimensions are n_max + 2 so the array composes directly with the
/// one-particle state (which needs occupation n_max + 1 on the Rob side).
pub fn scalar_hh_vacuum(tanh_qs: f64, trunc: &ScalarTruncation) -> TwoModeState {
    let d = trunc.n_max + 2;
    let mut st = TwoModeState::zeros(d, d);
    let cosh = cosh_from_tanh(tanh_qs);
    let mut coeff = 1.0 / cosh;
    for n in 0..=trunc.n_max {
        st.set(n, n, coeff);
        coeff *= tanh_qs;
    }
    st
}

/// Truncated Hartle-Hawking one-particle state for a scalar mode:
/// amplitude tanhⁿq √(n+1) / cosh²q at (n+1, n) for n ≤ n_max.
pub fn scalar_hh_one_particle(tanh_qs: f64, trunc: &ScalarTruncation) -> TwoModeState {
    let d = trunc.n_max + 2;
    let mut st = TwoModeState::zeros(d, d);
    let cosh = cosh_from_tanh(tanh_qs);
    let mut coeff = 1.0 / (cosh * cosh);
    for n in 0..=trunc.n_max {
        st.set(n + 1, n, coeff * ((n + 1) as f64).sqrt());
        coeff *= tanh_qs;
    }
    st
}

/// The maximally entangled scalar state seen by the free-falling observer,
/// expanded on the near-horizon basis:
/// (|0⟩_A ⊗ vacuum + |1⟩_A ⊗ one-particle)/√2, dims (2, n_max+2, n_max+2).
///
/// Squared norm is 1 - O(tail); the deficit is bounded by
/// `trunc.tail_bound`.
pub fn scalar_entangled(tanh_qs: f64, trunc: &ScalarTruncation) -> TripartiteState {
    let d = trunc.n_max + 2;
    let dims = SubsystemDims {
        alice: 2,
        rob: d,
        antirob: d,
    };
    let vac = scalar_hh_vacuum(tanh_qs, trunc);
    let one = scalar_hh_one_particle(tanh_qs, trunc);
    let mut st = TripartiteState::zero(dims);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for r in 0..d {
        for rb in 0..d {
            let v = vac.amplitude(r, rb);
            if v.norm_sqr() > 0.0 {
                st.amplitudes[(r) * d + rb] = v * s; // a = 0 block offset is 0
            }
            let w = one.amplitude(r, rb);
            if w.norm_sqr() > 0.0 {
                st.amplitudes[d * d + r * d + rb] = w * s; // a = 1 block
            }
        }
    }
    st
}

/// Basis labels for one Dirac mode in one region: vacuum, spin-up, spin-down,
/// and the spin pair. The index assignment is fixed so amplitude dumps are
/// reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracBasis {
    Vacuum = 0,
    Up = 1,
    Down = 2,
    Pair = 3,
}

impl DiracBasis {
    pub const ALL: [DiracBasis; 4] = [
        DiracBasis::Vacuum,
        DiracBasis::Up,
        DiracBasis::Down,
        DiracBasis::Pair,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::Usage(format!("Dirac basis index {i} out of range 0..4")))
    }

    pub fn label(self) -> &'static str {
        match self {
            DiracBasis::Vacuum => "0",
            DiracBasis::Up => "up",
            DiracBasis::Down => "down",
            DiracBasis::Pair => "pair",
        }
    }
}

/// Spin of a Dirac one-particle excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

fn check_tan_qd(tan_qd: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&tan_qd) {
        return Err(Error::Domain(format!(
            "tan q_d must lie in [0, 1], got {tan_qd}"
        )));
    }
    let qd = tan_qd.atan();
    Ok((qd.sin(), qd.cos()))
}

/// Hartle-Hawking vacuum for a Dirac mode in the Boulware basis (4 ⊗ 4):
/// cos²q |0,0⟩ + sin q cos q (|↑,↓⟩ + |↓,↑⟩) + sin²q |p,p⟩.
/// Exactly normalized for any q_d.
pub fn dirac_hh_vacuum(tan_qd: f64) -> Result<TwoModeState> {
    let (s, c) = check_tan_qd(tan_qd)?;
    let mut st = TwoModeState::zeros(4, 4);
    st.set(DiracBasis::Vacuum.index(), DiracBasis::Vacuum.index(), c * c);
    st.set(DiracBasis::Up.index(), DiracBasis::Down.index(), s * c);
    st.set(DiracBasis::Down.index(), DiracBasis::Up.index(), s * c);
    st.set(DiracBasis::Pair.index(), DiracBasis::Pair.index(), s * s);
    Ok(st)
}

/// Hartle-Hawking one-particle state for a Dirac mode:
/// spin-up:   cos q |↑,0⟩ + sin q |p,↑⟩;
/// spin-down: cos q |↓,0⟩ - sin q |p,↓⟩.
/// The opposite relative sign between the two spins comes from the
/// anticommutation bookkeeping of the pair state.
pub fn dirac_hh_one_particle(tan_qd: f64, spin: Spin) -> Result<TwoModeState> {
    let (s, c) = check_tan_qd(tan_qd)?;
    let mut st = TwoModeState::zeros(4, 4);
    match spin {
        Spin::Up => {
            st.set(DiracBasis::Up.index(), DiracBasis::Vacuum.index(), c);
            st.set(DiracBasis::Pair.index(), DiracBasis::Up.index(), s);
        }
        Spin::Down => {
            st.set(DiracBasis::Down.index(), DiracBasis::Vacuum.index(), c);
            st.set(DiracBasis::Pair.index(), DiracBasis::Down.index(), -s);
        }
    }
    Ok(st)
}

/// The maximally entangled Dirac state seen by the free-falling observer:
/// (|0⟩_A ⊗ vacuum + |↑⟩_A ⊗ spin-down)/√2, dims (2, 4, 4). Norm exactly 1.
pub fn dirac_entangled(tan_qd: f64) -> Result<TripartiteState> {
    let vac = dirac_hh_vacuum(tan_qd)?;
    let one = dirac_hh_one_particle(tan_qd, Spin::Down)?;
    let dims = SubsystemDims {
        alice: 2,
        rob: 4,
        antirob: 4,
    };
    let mut st = TripartiteState::zero(dims);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for r in 0..4 {
        for rb in 0..4 {
            st.amplitudes[r * 4 + rb] = vac.amplitude(r, rb) * s;
            st.amplitudes[16 + r * 4 + rb] = one.amplitude(r, rb) * s;
        }
    }
    Ok(st)
}
