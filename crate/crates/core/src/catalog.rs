//! Built-in statistics: Boltzmann, bosons, fermions, quons and species-pair
//! phases. All of them are flip-scaled, `T^{ij}_{kl} = q_{ij} δ^i_l δ^j_k`.

use crate::linalg::{c64, Complex64, Tolerance};
use crate::operators::{build_ttilde, BraidOperator, CrossOperator, OperatorError, StatisticsSystem};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PresetError {
    #[error("invalid preset parameters: {0}")]
    InvalidParams(String),
    #[error("unknown preset {0:?} (expected boltzmann, boson, fermion, quon or phase)")]
    UnknownPreset(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetKind {
    Boltzmann,
    Boson,
    Fermion,
    Quon,
    Phase,
}

impl PresetKind {
    pub const ALL: [PresetKind; 5] = [
        PresetKind::Boltzmann,
        PresetKind::Boson,
        PresetKind::Fermion,
        PresetKind::Quon,
        PresetKind::Phase,
    ];

    /// One-line summary for listings.
    pub fn summary(self) -> &'static str {
        match self {
            PresetKind::Boltzmann => "T = 0, no braid; every word is orthonormal",
            PresetKind::Boson => "T = B = flip; symmetric quotient",
            PresetKind::Fermion => "T = B = -flip; antisymmetric quotient",
            PresetKind::Quon => "T = q flip (needs --q), no braid",
            PresetKind::Phase => "T = exp(i Phi_ij) flip (needs --phi), braid B = T~",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PresetKind::Boltzmann => "boltzmann",
            PresetKind::Boson => "boson",
            PresetKind::Fermion => "fermion",
            PresetKind::Quon => "quon",
            PresetKind::Phase => "phase",
        }
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetKind {
    type Err = PresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PresetKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| PresetError::UnknownPreset(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// `T = 0`, no braid.
    Boltzmann { dim: usize },
    /// `T = B = τ`.
    Boson { dim: usize },
    /// `T = B = −τ`.
    Fermion { dim: usize },
    /// `T = q·τ`, no braid.
    Quon { dim: usize, q: f64 },
    /// `q_{ij} = exp(i·Φ_{ij})` with `Φ` real antisymmetric, row-major `N × N`.
    Phase { dim: usize, phi: Vec<f64> },
}

impl Preset {
    pub fn kind(&self) -> PresetKind {
        match self {
            Preset::Boltzmann { .. } => PresetKind::Boltzmann,
            Preset::Boson { .. } => PresetKind::Boson,
            Preset::Fermion { .. } => PresetKind::Fermion,
            Preset::Quon { .. } => PresetKind::Quon,
            Preset::Phase { .. } => PresetKind::Phase,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Preset::Boltzmann { dim }
            | Preset::Boson { dim }
            | Preset::Fermion { dim }
            | Preset::Quon { dim, .. }
            | Preset::Phase { dim, .. } => *dim,
        }
    }

    /// Assembles a preset from loose parameters, rejecting ones that do not
    /// apply to `kind`.
    pub fn from_params(
        kind: PresetKind,
        dim: usize,
        q: Option<f64>,
        phi: Option<&str>,
    ) -> Result<Self, PresetError> {
        if q.is_some() && kind != PresetKind::Quon {
            return Err(PresetError::InvalidParams(format!("--q does not apply to {kind}")));
        }
        if phi.is_some() && kind != PresetKind::Phase {
            return Err(PresetError::InvalidParams(format!("--phi does not apply to {kind}")));
        }
        Ok(match kind {
            PresetKind::Boltzmann => Preset::Boltzmann { dim },
            PresetKind::Boson => Preset::Boson { dim },
            PresetKind::Fermion => Preset::Fermion { dim },
            PresetKind::Quon => Preset::Quon {
                dim,
                q: q.ok_or_else(|| PresetError::InvalidParams("quon needs q".into()))?,
            },
            PresetKind::Phase => {
                let csv = phi.ok_or_else(|| PresetError::InvalidParams("phase needs phi".into()))?;
                Preset::Phase {
                    dim,
                    phi: parse_phases(dim, csv)?,
                }
            }
        })
    }

    /// Phase preset with every `Φ_{ij} = phi` for `i < j`.
    pub fn uniform_phase(dim: usize, phi: f64) -> Self {
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                m[i * dim + j] = match i.cmp(&j) {
                    std::cmp::Ordering::Less => phi,
                    std::cmp::Ordering::Greater => -phi,
                    std::cmp::Ordering::Equal => 0.0,
                };
            }
        }
        Preset::Phase { dim, phi: m }
    }

    fn label(&self) -> String {
        match self {
            Preset::Quon { dim, q } => format!("quon(N={dim},q={q})"),
            Preset::Phase { dim, phi } => {
                let upper: Vec<String> = (0..*dim)
                    .flat_map(|i| ((i + 1)..*dim).map(move |j| (i, j)))
                    .map(|(i, j)| phi[i * dim + j].to_string())
                    .collect();
                format!("phase(N={dim},phi=[{}])", upper.join(","))
            }
            other => format!("{}(N={})", other.kind(), other.dim()),
        }
    }
}

fn flip_scaled<F>(dim: usize, factor: F) -> Result<CrossOperator, OperatorError>
where
    F: Fn(usize, usize) -> Complex64,
{
    let entries: Vec<_> = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, j, i, factor(i, j)))
        .filter(|e| e.4 != c64(0.0, 0.0))
        .collect();
    CrossOperator::from_entries(dim, entries)
}

/// Builds the in-memory system for a preset.
///
/// Where a braid is present it is `B = T̃` as a map on `E ⊗ E`; for the
/// boson and fermion presets this is `±τ`.
pub fn make_preset(preset: &Preset) -> Result<StatisticsSystem, PresetError> {
    let dim = preset.dim();
    if dim == 0 || dim > crate::operators::MAX_DIM {
        return Err(OperatorError::InvalidDim(dim).into());
    }
    let (cross, with_braid) = match preset {
        Preset::Boltzmann { .. } => (CrossOperator::zero(dim)?, false),
        Preset::Boson { .. } => (flip_scaled(dim, |_, _| c64(1.0, 0.0))?, true),
        Preset::Fermion { .. } => (flip_scaled(dim, |_, _| c64(-1.0, 0.0))?, true),
        Preset::Quon { q, .. } => {
            if !q.is_finite() {
                return Err(PresetError::InvalidParams(format!("q must be finite, got {q}")));
            }
            (flip_scaled(dim, |_, _| c64(*q, 0.0))?, false)
        }
        Preset::Phase { phi, .. } => {
            validate_phases(dim, phi)?;
            (flip_scaled(dim, |i, j| Complex64::from_polar(1.0, phi[i * dim + j]))?, true)
        }
    };
    let braid = if with_braid {
        Some(BraidOperator::new(dim, build_ttilde(&cross))?)
    } else {
        None
    };
    Ok(StatisticsSystem::new(cross, braid, preset.label())?)
}

fn validate_phases(dim: usize, phi: &[f64]) -> Result<(), PresetError> {
    if phi.len() != dim * dim {
        return Err(PresetError::InvalidParams(format!(
            "phase matrix needs {} entries for N={dim}, got {}",
            dim * dim,
            phi.len()
        )));
    }
    let eps = Tolerance::default().eps();
    for i in 0..dim {
        for j in 0..dim {
            let (a, b) = (phi[i * dim + j], phi[j * dim + i]);
            if !a.is_finite() || (a + b).abs() > eps {
                return Err(PresetError::InvalidParams(format!(
                    "phase matrix must be real antisymmetric; Phi[{}][{}] = {a}, Phi[{}][{}] = {b}",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// Parses a phase matrix given either as `N²` row-major entries or as the
/// `N(N−1)/2` strictly-upper entries `Φ12, Φ13, …, Φ23, …`.
pub fn parse_phases(dim: usize, csv: &str) -> Result<Vec<f64>, PresetError> {
    let values: Vec<f64> = csv
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| PresetError::InvalidParams(format!("bad phase value {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if values.len() == dim * dim {
        return Ok(values);
    }
    let upper = dim * dim.saturating_sub(1) / 2;
    if values.len() == upper {
        let mut m = vec![0.0; dim * dim];
        let mut it = values.into_iter();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = it.next().expect("length checked");
                m[i * dim + j] = v;
                m[j * dim + i] = -v;
            }
        }
        return Ok(m);
    }
    Err(PresetError::InvalidParams(format!(
        "expected {} or {} phase values for N={dim}, got {}",
        dim * dim,
        upper,
        values.len()
    )))
}
