//! Open Gromov–Witten invariants of moment-map fibers and of Lagrangian
//! torus fibers over the four chambers.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::admissible::is_admissible;
use super::gfunc::{window_of, Window};
use super::{GwError, Result};
use crate::toric::{CurveClass, DiscClassVector, GGeometry, LABEL_W_INF, LABEL_XI_0, LABEL_XI_INF, LABEL_Z_INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChamberLabel {
    #[serde(rename = "C++")]
    PlusPlus,
    #[serde(rename = "C+-")]
    PlusMinus,
    #[serde(rename = "C-+")]
    MinusPlus,
    #[serde(rename = "C--")]
    MinusMinus,
}

impl ChamberLabel {
    pub const ALL: [ChamberLabel; 4] =
        [ChamberLabel::PlusPlus, ChamberLabel::PlusMinus, ChamberLabel::MinusPlus, ChamberLabel::MinusMinus];

    /// Chamber of a base point from the signs of `b1, b2`; `None` on a wall.
    pub fn of_point(b1: f64, b2: f64) -> Option<Self> {
        if b1 == 0.0 || b2 == 0.0 || b1.is_nan() || b2.is_nan() {
            return None;
        }
        Some(match (b1 > 0.0, b2 > 0.0) {
            (true, true) => ChamberLabel::PlusPlus,
            (true, false) => ChamberLabel::PlusMinus,
            (false, true) => ChamberLabel::MinusPlus,
            (false, false) => ChamberLabel::MinusMinus,
        })
    }

    pub fn b1_positive(self) -> bool {
        matches!(self, ChamberLabel::PlusPlus | ChamberLabel::PlusMinus)
    }

    pub fn b2_positive(self) -> bool {
        matches!(self, ChamberLabel::PlusPlus | ChamberLabel::MinusPlus)
    }
}

impl fmt::Display for ChamberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChamberLabel::PlusPlus => "C++",
            ChamberLabel::PlusMinus => "C+-",
            ChamberLabel::MinusPlus => "C-+",
            ChamberLabel::MinusMinus => "C--",
        })
    }
}

impl std::str::FromStr for ChamberLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "C++" | "++" | "pp" => Ok(ChamberLabel::PlusPlus),
            "C+-" | "+-" | "pm" => Ok(ChamberLabel::PlusMinus),
            "C-+" | "-+" | "mp" => Ok(ChamberLabel::MinusPlus),
            "C--" | "--" | "mm" => Ok(ChamberLabel::MinusMinus),
            other => Err(format!("unknown chamber {other:?}")),
        }
    }
}

/// The basic disc class a disc class is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasicDisc {
    /// `beta_p` for the height-one divisor `D_p`.
    Toric(usize),
    XiZero,
    XiInf,
    ZInf,
    WInf,
}

/// A disc class in the compactified resolution, stored as its intersection
/// vector with all toric divisors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DiscClassG {
    pub vector: DiscClassVector,
}

/// The shapes of disc classes appearing in the chamber rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscShape {
    /// `beta + alpha` for a basic class.
    Basic { basic: BasicDisc, alpha: CurveClass },
    /// `beta_{z=inf} + (beta_i - beta_0) + alpha`.
    ZShift { i: usize, alpha: CurveClass },
    /// `beta_{w=inf} + (beta_j - beta_{k+1}) + alpha`.
    WShift { j: usize, alpha: CurveClass },
}

fn compact_index(g: &GGeometry, b: BasicDisc) -> usize {
    let label = match b {
        BasicDisc::Toric(p) => return p,
        BasicDisc::XiZero => LABEL_XI_0,
        BasicDisc::XiInf => LABEL_XI_INF,
        BasicDisc::ZInf => LABEL_Z_INF,
        BasicDisc::WInf => LABEL_W_INF,
    };
    g.fan.ray_index(label).expect("compactified fan")
}

impl DiscClassG {
    pub fn basic(g: &GGeometry, b: BasicDisc) -> Self {
        Self { vector: DiscClassVector::basic(g.n_rays(), compact_index(g, b)) }
    }

    pub fn basic_plus(g: &GGeometry, b: BasicDisc, alpha: &CurveClass) -> Self {
        Self { vector: Self::basic(g, b).vector.add(&alpha.disc) }
    }

    /// `beta_{z=inf} + (beta_i - beta_0) + alpha`.
    pub fn z_shift(g: &GGeometry, i: usize, alpha: &CurveClass) -> Self {
        let v = Self::basic(g, BasicDisc::ZInf).vector;
        let v = v.add(&DiscClassVector::basic(g.n_rays(), i)).sub(&DiscClassVector::basic(g.n_rays(), 0));
        Self { vector: v.add(&alpha.disc) }
    }

    /// `beta_{w=inf} + (beta_j - beta_{k+1}) + alpha`.
    pub fn w_shift(g: &GGeometry, j: usize, alpha: &CurveClass) -> Self {
        let v = Self::basic(g, BasicDisc::WInf).vector;
        let v = v
            .add(&DiscClassVector::basic(g.n_rays(), j))
            .sub(&DiscClassVector::basic(g.n_rays(), g.k + 1));
        Self { vector: v.add(&alpha.disc) }
    }

    pub fn maslov_index(&self) -> i64 {
        self.vector.maslov_index()
    }

    /// Identifies the shape of the class, or `None` if it matches none of the
    /// shapes in the chamber rules.
    pub fn decode(&self, g: &GGeometry) -> Option<DiscShape> {
        let n = g.n_rays();
        if self.vector.coeffs.len() != n {
            return None;
        }
        let h1 = g.n_height_one();
        let compact: Vec<i64> = self.vector.coeffs[h1..].to_vec();
        let rays = g.fan.rays();
        let closed = |v: Vec<i64>| CurveClass::new(&g.fan, v).ok();
        let with_unit = |idx: usize, sign: i64, v: &[i64]| {
            let mut w = v.to_vec();
            w[idx] -= sign;
            w
        };
        let boundary = |v: &[i64]| {
            let mut s = [0i64; 3];
            for (c, r) in v.iter().zip(rays) {
                for t in 0..3 {
                    s[t] += c * r[t];
                }
            }
            s
        };
        let v = &self.vector.coeffs;
        if compact.iter().all(|&c| c == 0) {
            let b = boundary(v);
            let p = (0..h1).find(|&p| rays[p] == b)?;
            let alpha = closed(with_unit(p, 1, v))?;
            return Some(DiscShape::Basic { basic: BasicDisc::Toric(p), alpha });
        }
        let nonzero: Vec<usize> = (0..4).filter(|&i| compact[i] != 0).collect();
        if nonzero.len() != 1 || compact[nonzero[0]] != 1 {
            return None;
        }
        let idx = h1 + nonzero[0];
        let rest = with_unit(idx, 1, v);
        let b = boundary(&rest);
        let label = g.fan.label(idx);
        if label == LABEL_XI_0 || label == LABEL_XI_INF {
            let basic = if label == LABEL_XI_0 { BasicDisc::XiZero } else { BasicDisc::XiInf };
            return Some(DiscShape::Basic { basic, alpha: closed(rest)? });
        }
        let anchor = if label == LABEL_Z_INF { 0 } else { g.k + 1 };
        let target = (0..h1).find(|&j| {
            let r = rays[j];
            let a = rays[anchor];
            [r[0] - a[0], r[1] - a[1], r[2] - a[2]] == b
        })?;
        let alpha = closed(with_unit(anchor, -1, &with_unit(target, 1, &rest)))?;
        Some(if label == LABEL_Z_INF {
            if target == 0 {
                DiscShape::Basic { basic: BasicDisc::ZInf, alpha }
            } else {
                DiscShape::ZShift { i: target, alpha }
            }
        } else if target == g.k + 1 {
            DiscShape::Basic { basic: BasicDisc::WInf, alpha }
        } else {
            DiscShape::WShift { j: target, alpha }
        })
    }
}

/// `n^L_{beta_p + alpha}` for a height-one basic class `beta_p`.
fn moment_fiber_value(g: &GGeometry, p: usize, alpha: &CurveClass) -> u8 {
    let Some(n) = g.coordinates(alpha) else { return 0 };
    let Ok(w) = window_of(g, p) else { return 0 };
    let outside = |keep: &[usize]| n.iter().enumerate().all(|(m, &x)| keep.contains(&m) || x == 0);
    let admissible = |idx: Vec<usize>, center: usize| -> bool {
        if !outside(&idx) {
            return false;
        }
        let s: Option<Vec<u32>> = idx.iter().map(|&m| u32::try_from(n[m]).ok()).collect();
        s.is_some_and(|s| is_admissible(&s, center))
    };
    let ok = match w {
        Window::Corner => n.iter().all(|&x| x == 0),
        Window::C => admissible((1..g.k).map(|i| g.c_index(i)).collect(), p),
        Window::E => admissible((1..g.l).map(|j| g.e_index(j)).collect(), p - g.k - 1),
    };
    u8::from(ok)
}

/// Invariant of a moment-map fiber. Defined for classes `beta_p + alpha`
/// with `beta_p` a height-one basic class.
pub fn ogw_moment_fiber(beta: &DiscClassG, g: &GGeometry) -> Result<u8> {
    match beta.decode(g) {
        Some(DiscShape::Basic { basic: BasicDisc::Toric(p), alpha }) => Ok(moment_fiber_value(g, p, &alpha)),
        Some(_) => Err(GwError::InvalidArgument(
            "classes on compactifying divisors are not moment-map fiber classes of the toric theorem".into(),
        )),
        None => Ok(0),
    }
}

/// Invariant of a Lagrangian torus fiber over a chamber. Classes outside
/// the chamber's list get 0.
pub fn ogw_chamber(chamber: ChamberLabel, beta: &DiscClassG, g: &GGeometry) -> u8 {
    let Some(shape) = beta.decode(g) else { return 0 };
    let (k, l) = (g.k, g.l);
    let bare = |a: &CurveClass| a.is_zero();
    let z_range = |i: usize| i <= k;
    let w_range = |j: usize| (k + 1..=k + l + 1).contains(&j);
    use BasicDisc::*;
    use ChamberLabel::*;
    match (chamber, shape) {
        (PlusPlus, DiscShape::Basic { basic: Toric(p), alpha }) => moment_fiber_value(g, p, &alpha),
        (PlusPlus, DiscShape::Basic { alpha, .. }) => u8::from(bare(&alpha)),
        (PlusPlus, _) => 0,

        (PlusMinus, DiscShape::Basic { basic: Toric(p), alpha }) => {
            if p <= k {
                moment_fiber_value(g, p, &alpha)
            } else {
                u8::from(p == k + 1 && bare(&alpha))
            }
        }
        (PlusMinus, DiscShape::Basic { basic: XiZero | XiInf | ZInf, alpha }) => u8::from(bare(&alpha)),
        (PlusMinus, DiscShape::Basic { basic: WInf, alpha }) => moment_fiber_value(g, k + 1, &alpha),
        (PlusMinus, DiscShape::WShift { j, alpha }) if w_range(j) => moment_fiber_value(g, j, &alpha),
        (PlusMinus, _) => 0,

        (MinusPlus, DiscShape::Basic { basic: Toric(p), alpha }) => {
            if p > k {
                moment_fiber_value(g, p, &alpha)
            } else {
                u8::from(p == 0 && bare(&alpha))
            }
        }
        (MinusPlus, DiscShape::Basic { basic: XiZero | XiInf | WInf, alpha }) => u8::from(bare(&alpha)),
        (MinusPlus, DiscShape::Basic { basic: ZInf, alpha }) => moment_fiber_value(g, 0, &alpha),
        (MinusPlus, DiscShape::ZShift { i, alpha }) if z_range(i) => moment_fiber_value(g, i, &alpha),
        (MinusPlus, _) => 0,

        (MinusMinus, DiscShape::Basic { basic: Toric(p), alpha }) => u8::from((p == 0 || p == k + 1) && bare(&alpha)),
        (MinusMinus, DiscShape::Basic { basic: XiZero | XiInf, alpha }) => u8::from(bare(&alpha)),
        (MinusMinus, DiscShape::Basic { basic: ZInf, alpha }) => moment_fiber_value(g, 0, &alpha),
        (MinusMinus, DiscShape::Basic { basic: WInf, alpha }) => moment_fiber_value(g, k + 1, &alpha),
        (MinusMinus, DiscShape::ZShift { i, alpha }) if z_range(i) => moment_fiber_value(g, i, &alpha),
        (MinusMinus, DiscShape::WShift { j, alpha }) if w_range(j) => moment_fiber_value(g, j, &alpha),
        (MinusMinus, _) => 0,
    }
}
