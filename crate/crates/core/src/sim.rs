//! Deterministic generators for two imbalanced binary-classification
//! benchmarks: a pressure-vessel cost dataset (label hides a thickness
//! change) and an underground-storage-tank dataset (label hides a shape
//! change), plus the cost quartic and liquid-volume formulas they rely on.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::{gaussian, seeded, uniform};

pub const BASELINE_SHELL: f64 = 1.8048;
pub const BASELINE_HEAD: f64 = 0.0939;
pub const BASELINE_RADIUS: f64 = 13.8360;
pub const BASELINE_LENGTH: f64 = 123.2019;

pub const BASELINE_TANK_RADIUS: f64 = 4.0;
pub const BASELINE_TANK_LENGTH: f64 = 32.0;

/// Pressure-vessel design variables, all in inches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VesselParams {
    t_s: f64,
    t_h: f64,
    radius: f64,
    length: f64,
}

impl VesselParams {
    /// Fields must be finite and nonnegative; zero is allowed so that
    /// degenerate vessels (no radius, no length) price at zero cost.
    pub fn new(t_s: f64, t_h: f64, radius: f64, length: f64) -> Result<Self> {
        for (name, value) in [
            ("t_s", t_s),
            ("t_h", t_h),
            ("radius", radius),
            ("length", length),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Self { t_s, t_h, radius, length })
    }

    /// The reference design the label-0 population is drawn around.
    pub fn baseline() -> Self {
        Self {
            t_s: BASELINE_SHELL,
            t_h: BASELINE_HEAD,
            radius: BASELINE_RADIUS,
            length: BASELINE_LENGTH,
        }
    }

    pub fn t_s(&self) -> f64 {
        self.t_s
    }

    pub fn t_h(&self) -> f64 {
        self.t_h
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Material, forming, and welding cost of a cylindrical vessel with
/// hemispherical heads:
/// 0.6224·x₁x₃x₄ + 1.7781·x₂x₃² + 3.1661·x₁²x₄ + 19.84·x₁²x₃.
pub fn pv_cost(params: &VesselParams) -> f64 {
    let (x1, x2, x3, x4) = (params.t_s, params.t_h, params.radius, params.length);
    0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 * x3 + 3.1661 * x1 * x1 * x4 + 19.84 * x1 * x1 * x3
}

/// Horizontal tank shapes whose fill volume is known in closed form.
/// `a` is the vertical semi-axis, `b` the horizontal one; fill height is
/// measured from the tank bottom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TankGeometry {
    Cylinder { radius: f64, length: f64 },
    CylinderHemiCaps { radius: f64, length: f64 },
    Ellipse { a: f64, b: f64, length: f64 },
    EllipseHemiCaps { a: f64, b: f64, length: f64 },
}

impl TankGeometry {
    pub fn cylinder(radius: f64, length: f64) -> Result<Self> {
        Self::validated(Self::Cylinder { radius, length })
    }

    pub fn cylinder_hemi_caps(radius: f64, length: f64) -> Result<Self> {
        Self::validated(Self::CylinderHemiCaps { radius, length })
    }

    pub fn ellipse(a: f64, b: f64, length: f64) -> Result<Self> {
        Self::validated(Self::Ellipse { a, b, length })
    }

    pub fn ellipse_hemi_caps(a: f64, b: f64, length: f64) -> Result<Self> {
        Self::validated(Self::EllipseHemiCaps { a, b, length })
    }

    fn validated(geometry: Self) -> Result<Self> {
        let dims: &[(&'static str, f64)] = match &geometry {
            Self::Cylinder { radius, length } | Self::CylinderHemiCaps { radius, length } => {
                &[("radius", *radius), ("length", *length)]
            }
            Self::Ellipse { a, b, length } | Self::EllipseHemiCaps { a, b, length } => {
                &[("a", *a), ("b", *b), ("length", *length)]
            }
        };
        for &(name, value) in dims {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(geometry)
    }

    /// Top of the tank: 2r for cylinders, 2a for ellipses.
    pub fn max_height(&self) -> f64 {
        match self {
            Self::Cylinder { radius, .. } | Self::CylinderHemiCaps { radius, .. } => 2.0 * radius,
            Self::Ellipse { a, .. } | Self::EllipseHemiCaps { a, .. } => 2.0 * a,
        }
    }
}

/// Liquid volume at fill height `height`. Inverse-cosine arguments are
/// clamped to [-1, 1] and segment-root arguments floored at 0 so that
/// heights one rounding away from the rim stay finite.
pub fn tank_volume(geometry: &TankGeometry, height: f64) -> Result<f64> {
    let max = geometry.max_height();
    if !(height >= 0.0 && height <= max) {
        return Err(Error::HeightOutOfRange { height, max });
    }
    let h = height;
    let value = match *geometry {
        TankGeometry::Cylinder { radius: r, length: l } => cylinder_segment(r, l, h),
        TankGeometry::CylinderHemiCaps { radius: r, length: l } => {
            cylinder_segment(r, l, h) + PI * h * h * (3.0 * r - h) / 3.0
        }
        TankGeometry::Ellipse { a, b, length: l } => ellipse_segment(a, b, l, h),
        TankGeometry::EllipseHemiCaps { a, b, length: l } => {
            let g = ellipse_cap_radius(a, b, h);
            let caps = (2.0 * PI * a.powi(3)
                + PI * (a - h) * (h * b * b / a) * ((h - 2.0 * a) / a))
                / 3.0
                - 2.0 * PI * a.powi(3) * (a - h) / (3.0 * g);
            ellipse_segment(a, b, l, h) + caps
        }
    };
    Ok(value)
}

fn cylinder_segment(r: f64, l: f64, h: f64) -> f64 {
    let arg = ((r - h) / r).clamp(-1.0, 1.0);
    l * (r * r * arg.acos() - (r - h) * (2.0 * r * h - h * h).max(0.0).sqrt())
}

/// g interpolates between the two semi-axes as the fill line sweeps the
/// cross-section; g ∈ [min(a,b), max(a,b)] keeps every division safe.
fn ellipse_cap_radius(a: f64, b: f64, h: f64) -> f64 {
    (a * a + (h * h - 2.0 * h * a) * (1.0 - b * b / (a * a))).sqrt()
}

fn ellipse_segment(a: f64, b: f64, l: f64, h: f64) -> f64 {
    let g = ellipse_cap_radius(a, b, h);
    let arg = ((a - h) / g).clamp(-1.0, 1.0);
    let t = 1.0 - h / a;
    l * (a * b * arg.acos() - b * (a - h) * (1.0 - t * t).max(0.0).sqrt())
}

/// Size, class imbalance, and seed of a generated dataset. The majority
/// (label 0) gets floor(size·(1-imbalance)) rows, the minority the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    size: usize,
    imbalance: f64,
    seed: u64,
}

impl SimConfig {
    pub fn new(size: usize, imbalance: f64, seed: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter { name: "size", value: 0.0 });
        }
        if !(imbalance > 0.0 && imbalance < 1.0) {
            return Err(Error::InvalidParameter { name: "imbalance", value: imbalance });
        }
        Ok(Self { size, imbalance, seed })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn imbalance(&self) -> f64 {
        self.imbalance
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// (majority, minority) row counts.
    pub fn split(&self) -> (usize, usize) {
        let s0 = (self.size as f64 * (1.0 - self.imbalance)).floor() as usize;
        (s0, self.size - s0)
    }
}

/// Feature rows with {0,1} labels; all label-0 rows precede all label-1
/// rows in generated datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub feature_names: &'static [&'static str],
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Deterministic stratified halving: within each label group, rows
    /// alternate first half / second half in generation order.
    pub fn split_alternating(&self) -> (LabeledDataset, LabeledDataset) {
        let mut first = LabeledDataset {
            features: Vec::new(),
            labels: Vec::new(),
            feature_names: self.feature_names,
        };
        let mut second = first.clone();
        let mut seen = [0usize; 2];
        for (row, &label) in self.features.iter().zip(&self.labels) {
            let target = if seen[label as usize] % 2 == 0 { &mut first } else { &mut second };
            target.features.push(row.clone());
            target.labels.push(label);
            seen[label as usize] += 1;
        }
        (first, second)
    }
}

/// Pressure-vessel dataset. Label 0 draws R ~ N(13.8360, 1) and
/// L ~ N(123.2019, 1) around the baseline thicknesses; label 1 redraws
/// R, L fresh and swaps in the variation thicknesses. Only [R, L, cost]
/// are emitted, so the thickness change is visible solely through cost.
///
/// Draw order per label block: the whole R array, then the whole L array.
pub fn simulate_pv(config: SimConfig, t_s_v: f64, t_h_v: f64) -> Result<LabeledDataset> {
    for (name, value) in [("t_s_v", t_s_v), ("t_h_v", t_h_v)] {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidParameter { name, value });
        }
    }
    let (s0, s1) = config.split();
    let mut rng = seeded(config.seed);
    let mut features = Vec::with_capacity(config.size);
    let mut labels = Vec::with_capacity(config.size);
    for (count, t_s, t_h, label) in [
        (s0, BASELINE_SHELL, BASELINE_HEAD, 0u8),
        (s1, t_s_v, t_h_v, 1u8),
    ] {
        let radii: Vec<f64> = (0..count).map(|_| gaussian(&mut rng, BASELINE_RADIUS, 1.0)).collect();
        let lengths: Vec<f64> =
            (0..count).map(|_| gaussian(&mut rng, BASELINE_LENGTH, 1.0)).collect();
        for (&r, &l) in radii.iter().zip(&lengths) {
            let cost = pv_cost(&VesselParams::new(t_s, t_h, r, l)?);
            features.push(vec![r, l, cost]);
            labels.push(label);
        }
    }
    Ok(LabeledDataset { features, labels, feature_names: &["R", "L", "cost"] })
}

/// Underground-storage-tank dataset. Label 0 fills the baseline cylinder
/// (r = 4, L = 32), label 1 an ellipse (a, b) of the same length; with
/// `endcaps` both get hemispherical heads. Heights are drawn uniformly
/// one unit clear of the bottom and rim; the emitted volume carries
/// N(0, 2) noise and the emitted height a U(-0.05, 0.05) jitter, while
/// the volume itself is computed from the clean height.
///
/// Draw order per label block: noise array, jitter array, height array.
pub fn simulate_ust(config: SimConfig, a: f64, b: f64, endcaps: bool) -> Result<LabeledDataset> {
    if !a.is_finite() || 2.0 * a - 1.0 < 1.0 {
        return Err(Error::InvalidParameter { name: "a", value: a });
    }
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::InvalidParameter { name: "b", value: b });
    }
    let (r, l) = (BASELINE_TANK_RADIUS, BASELINE_TANK_LENGTH);
    let (base, alt) = if endcaps {
        (TankGeometry::cylinder_hemi_caps(r, l)?, TankGeometry::ellipse_hemi_caps(a, b, l)?)
    } else {
        (TankGeometry::cylinder(r, l)?, TankGeometry::ellipse(a, b, l)?)
    };
    let (s0, s1) = config.split();
    let mut rng = seeded(config.seed);
    let mut features = Vec::with_capacity(config.size);
    let mut labels = Vec::with_capacity(config.size);
    for (count, geometry, h_hi, label) in
        [(s0, &base, 2.0 * r - 1.0, 0u8), (s1, &alt, 2.0 * a - 1.0, 1u8)]
    {
        let noise: Vec<f64> = (0..count).map(|_| gaussian(&mut rng, 0.0, 2.0)).collect();
        let jitter: Vec<f64> = (0..count).map(|_| uniform(&mut rng, -0.05, 0.05)).collect();
        let heights: Vec<f64> = (0..count).map(|_| uniform(&mut rng, 1.0, h_hi)).collect();
        for i in 0..count {
            let volume = tank_volume(geometry, heights[i])?;
            features.push(vec![volume + noise[i], heights[i] + jitter[i]]);
            labels.push(label);
        }
    }
    Ok(LabeledDataset { features, labels, feature_names: &["volume", "height"] })
}
