//! Initial node values `x(0)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{Graph, Point};

/// One isotropic Gaussian bump `a · exp(-‖p - c‖² / (2σ²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub amplitude: f64,
    pub center: [f64; 2],
    pub width: f64,
}

pub fn default_bumps() -> Vec<Bump> {
    vec![
        Bump {
            amplitude: 1.0,
            center: [0.25, 0.25],
            width: 0.15,
        },
        Bump {
            amplitude: -1.0,
            center: [0.75, 0.75],
            width: 0.15,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    /// Sum of Gaussian bumps sampled at node locations.
    GaussianBumps(Vec<Bump>),
    /// `x + y` at each node location.
    Linear,
    /// A single node, picked by the seed, holds 1; all others hold 0.
    Spike,
    /// i.i.d. standard normal values.
    IidGaussian,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::GaussianBumps(_) => "gaussian_bumps",
            FieldKind::Linear => "linear",
            FieldKind::Spike => "spike",
            FieldKind::IidGaussian => "iid_gaussian",
        }
    }

    fn needs_locations(&self) -> bool {
        matches!(self, FieldKind::GaussianBumps(_) | FieldKind::Linear)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub seed: u64,
}

impl FieldSpec {
    pub fn new(kind: FieldKind, seed: u64) -> Self {
        FieldSpec { kind, seed }
    }

    pub fn gaussian_bumps() -> Self {
        Self::new(FieldKind::GaussianBumps(default_bumps()), 0)
    }

    pub fn validate(&self) -> Result<()> {
        if let FieldKind::GaussianBumps(bumps) = &self.kind {
            if bumps.is_empty() {
                return Err(Error::InvalidArgument("gaussian_bumps needs at least one bump".into()));
            }
            for b in bumps {
                if b.width.is_nan() || b.width <= 0.0 || !b.amplitude.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "bump width must be positive and amplitude finite, got {b:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Sample the field described by `spec` on the nodes of `g`.
pub fn synthesize(spec: &FieldSpec, g: &Graph) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = g.n();
    let locations = if spec.kind.needs_locations() {
        g.locations().ok_or(Error::MissingLocations)?
    } else {
        &[]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = match &spec.kind {
        FieldKind::GaussianBumps(bumps) => locations.iter().map(|p| bump_sum(bumps, p)).collect(),
        FieldKind::Linear => locations.iter().map(|p| p.x + p.y).collect(),
        FieldKind::Spike => {
            let mut x = vec![0.0; n];
            if n > 0 {
                x[rng.random_range(0..n)] = 1.0;
            }
            x
        }
        FieldKind::IidGaussian => (0..n).map(|_| rng.sample(StandardNormal)).collect(),
    };
    Ok(values)
}

fn bump_sum(bumps: &[Bump], p: &Point) -> f64 {
    bumps
        .iter()
        .map(|b| {
            let c = Point::new(b.center[0], b.center[1]);
            b.amplitude * (-p.dist2(&c) / (2.0 * b.width * b.width)).exp()
        })
        .sum()
}
