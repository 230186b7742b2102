use std::f64::consts::PI;
use std::fmt;

use super::KahlerCurvature;
use crate::error::{invalid, Error, Result};

/// Catalog geometry with closed-form radial data.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpace {
    /// Simply connected space of constant holomorphic bisectional curvature `c`.
    SpaceForm { n: usize, c: f64 },
    /// Hyperquadric `Q_n ⊂ ℂP^{n+1}` with the induced metric.
    Hyperquadric { n: usize },
    /// Riemannian product of the factors.
    Product(Vec<ModelSpace>),
    /// `(base, λ·g)`.
    Scaled { base: Box<ModelSpace>, factor: f64 },
}

/// A constant-HBSC factor of complex dimension `n` occupying frame indices
/// `offset..offset + n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceFormFactor {
    pub n: usize,
    pub c: f64,
    pub offset: usize,
}

/// `multiplicity` radial directions sharing the constant sectional curvature
/// `curvature` against the geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBlock {
    pub multiplicity: usize,
    pub curvature: f64,
}

/// Radial curvature eigenvalues along a geodesic of a locally symmetric
/// model. For a single space form the first block is the `Jγ′` direction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub blocks: Vec<RadialBlock>,
}

impl RadialProfile {
    pub fn new(blocks: Vec<RadialBlock>) -> Self {
        Self { blocks: blocks.into_iter().filter(|b| b.multiplicity > 0).collect() }
    }

    /// Profile of the constant-HBSC space: `Jγ′` sees `2c`, the other
    /// `2n − 2` normal directions see `c/2`.
    pub fn space_form(n: usize, c: f64) -> Self {
        Self::new(vec![
            RadialBlock { multiplicity: 1, curvature: 2.0 * c },
            RadialBlock { multiplicity: 2 * n - 2, curvature: c / 2.0 },
        ])
    }

    /// Number of real directions normal to the geodesic.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity).sum()
    }

    pub fn max_curvature(&self) -> f64 {
        self.blocks.iter().map(|b| b.curvature).fold(f64::NEG_INFINITY, f64::max)
    }

    /// First conjugate radius `π/√κ_max` (infinite if no block is positive).
    pub fn conjugate_radius(&self) -> f64 {
        let k = self.max_curvature();
        if k > 0.0 {
            PI / k.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Sorted multiset of curvatures, one entry per direction.
    pub fn expanded(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.curvature, b.multiplicity)).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl ModelSpace {
    pub fn space_form(n: usize, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("space form needs n ≥ 1"));
        }
        if !c.is_finite() {
            return Err(invalid("curvature must be finite"));
        }
        Ok(Self::SpaceForm { n, c })
    }

    pub fn hyperquadric(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("hyperquadric needs n ≥ 2, got {n}")));
        }
        Ok(Self::Hyperquadric { n })
    }

    pub fn product(factors: Vec<ModelSpace>) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("product needs at least one factor"));
        }
        Ok(Self::Product(factors))
    }

    pub fn scaled(base: ModelSpace, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(invalid(format!("metric factor must be positive, got {factor}")));
        }
        Ok(Self::Scaled { base: Box::new(base), factor })
    }

    /// `(ℂP¹, 2/(n+1)·ω_FS)^n`: every factor has Gauss curvature `n + 1` and
    /// the product has `Ric = (n+1)·g`.
    pub fn cp1_product(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("product needs n ≥ 1"));
        }
        let factor = Self::scaled(Self::space_form(1, 1.0)?, 2.0 / (n as f64 + 1.0))?;
        Self::product(vec![factor; n])
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        match self {
            Self::SpaceForm { n, .. } | Self::Hyperquadric { n } => *n,
            Self::Product(fs) => fs.iter().map(Self::dim).sum(),
            Self::Scaled { base, .. } => base.dim(),
        }
    }

    pub fn curvature(&self) -> Result<KahlerCurvature> {
        match self {
            Self::SpaceForm { n, c } => KahlerCurvature::const_hbsc(*n, *c),
            Self::Hyperquadric { n } => KahlerCurvature::hyperquadric(*n),
            Self::Product(fs) => {
                let parts = fs.iter().map(Self::curvature).collect::<Result<Vec<_>>>()?;
                KahlerCurvature::product(&parts)
            }
            Self::Scaled { base, factor } => base.curvature()?.scale_metric(*factor),
        }
    }

    /// Flattens the model into constant-HBSC factors, absorbing scalings.
    pub fn space_form_factors(&self) -> Result<Vec<SpaceFormFactor>> {
        let mut out = Vec::new();
        self.collect_factors(1.0, &mut out)?;
        let mut offset = 0;
        for f in &mut out {
            f.offset = offset;
            offset += f.n;
        }
        Ok(out)
    }

    fn collect_factors(&self, scale: f64, out: &mut Vec<SpaceFormFactor>) -> Result<()> {
        match self {
            Self::SpaceForm { n, c } => {
                out.push(SpaceFormFactor { n: *n, c: c / scale, offset: 0 });
                Ok(())
            }
            Self::Hyperquadric { .. } => Err(Error::Unsupported("radial data on the hyperquadric is not in the catalog".into())),
            Self::Product(fs) => fs.iter().try_for_each(|f| f.collect_factors(scale, out)),
            Self::Scaled { base, factor } => base.collect_factors(scale * factor, out),
        }
    }

    /// Radial profile along a unit geodesic whose component in factor `i`
    /// has speed `mix[i]` (`Σ mix² = 1`). A single space form takes `mix = [1]`.
    ///
    /// Factor `i` contributes `2c_i λ_i²` on its `J`-direction, `c_i λ_i²/2` on
    /// its `2n_i − 2` remaining directions, and the `m − 1` directions in the
    /// span of the factor velocities orthogonal to `γ′` are flat.
    pub fn radial_profile(&self, mix: &[f64]) -> Result<RadialProfile> {
        let factors = self.space_form_factors()?;
        check_mix(mix, factors.len())?;
        let mut blocks = Vec::with_capacity(2 * factors.len() + 1);
        for (f, &l) in factors.iter().zip(mix) {
            let l2 = l * l;
            blocks.push(RadialBlock { multiplicity: 1, curvature: 2.0 * f.c * l2 });
            blocks.push(RadialBlock { multiplicity: 2 * f.n - 2, curvature: f.c * l2 / 2.0 });
        }
        blocks.push(RadialBlock { multiplicity: factors.len() - 1, curvature: 0.0 });
        Ok(RadialProfile::new(blocks))
    }

    /// Minimum holomorphic sectional curvature, in closed form.
    ///
    /// On a product, `HSC(X) = Σ 2c_i w_i²` with `w_i = |X_i|²`; the minimum
    /// over the simplex is `2/Σ(1/c_i)` when all `c_i > 0` and `min 2c_i`
    /// otherwise. The hyperquadric has `HSC = 2 − |Σ X_i²|² ∈ [1, 2]`.
    pub fn min_hsc(&self) -> Result<f64> {
        if let Self::Hyperquadric { .. } = self {
            return Ok(1.0);
        }
        if let Self::Scaled { base, factor } = self {
            if let Self::Hyperquadric { .. } = **base {
                return Ok(1.0 / factor);
            }
        }
        let factors = self.space_form_factors()?;
        if factors.iter().all(|f| f.c > 0.0) {
            Ok(2.0 / factors.iter().map(|f| 1.0 / f.c).sum::<f64>())
        } else {
            Ok(factors.iter().map(|f| 2.0 * f.c).fold(f64::INFINITY, f64::min))
        }
    }

    /// Diameter of the catalog model; infinite when some factor is
    /// non-compact.
    pub fn diameter(&self) -> Result<f64> {
        let factors = self.space_form_factors()?;
        let mut acc = 0.0;
        for f in factors {
            if f.c <= 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += PI * PI / (2.0 * f.c);
        }
        Ok(acc.sqrt())
    }

    /// Short registry-style name.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SpaceForm { n, c } => write!(f, "hbsc(n={n},c={c})"),
            Self::Hyperquadric { n } => write!(f, "hyperquadric(n={n})"),
            Self::Product(fs) => {
                write!(f, "product(")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "×")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Self::Scaled { base, factor } => write!(f, "scaled({base},{factor})"),
        }
    }
}

pub(crate) fn check_mix(mix: &[f64], factors: usize) -> Result<()> {
    if mix.len() != factors {
        return Err(invalid(format!("mix has {} entries, model has {factors} factors", mix.len())));
    }
    let s: f64 = mix.iter().map(|l| l * l).sum();
    if (s - 1.0).abs() > 1e-12 || mix.iter().any(|l| !l.is_finite()) {
        return Err(invalid(format!("mix must satisfy Σλ² = 1, got {s}")));
    }
    Ok(())
}
