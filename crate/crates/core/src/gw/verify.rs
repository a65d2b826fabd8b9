//! The open mirror identity `sum_alpha n_{beta_p + alpha} q^alpha = exp g_p`,
//! checked by two pipelines: the hypergeometric side pulled back to flat
//! coordinates, and the admissible-sequence side pushed forward to complex
//! coordinates.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::admissible::enumerate_admissible;
use super::gfunc::{g_function_g, mirror_map_g, window_of, Window};
use super::{GwError, Result};
use crate::series::{rat, TruncatedSeries};
use crate::toric::GGeometry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponent: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
    /// `"flat"` or `"complex"`.
    pub coords: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenMirrorReport {
    pub ok: bool,
    pub order: u32,
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub window: Window,
    pub center: Option<usize>,
    pub admissible_classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub mismatches: Vec<Mismatch>,
}

const E_WINDOW_NOTE: &str =
    "E-window classes use the same admissibility conditions as the C-window, with center p-k-1";

/// `sum q^alpha` over the admissible classes `alpha` for divisor `p`, as a
/// series in the curve-basis variables.
pub fn admissible_series(g: &GGeometry, p: usize, order: u32) -> Result<(TruncatedSeries, Option<usize>)> {
    let vars = g.var_names();
    let (idx, m, center): (Vec<usize>, usize, Option<usize>) = match window_of(g, p)? {
        Window::Corner => return Ok((TruncatedSeries::one(&vars, order), None)),
        Window::C => ((1..g.k).map(|i| g.c_index(i)).collect(), g.k, Some(p)),
        Window::E => ((1..g.l).map(|j| g.e_index(j)).collect(), g.l, Some(p - g.k - 1)),
    };
    let seqs = enumerate_admissible(m, center.unwrap_or(0), order)?;
    let terms = seqs.into_iter().map(|s| {
        let mut e = vec![0u32; vars.len()];
        for (&slot, &x) in idx.iter().zip(&s.entries) {
            e[slot] = x;
        }
        (e, BigRational::one())
    });
    Ok((TruncatedSeries::from_terms(&vars, order, terms)?, center))
}

fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries, coords: &'static str, out: &mut Vec<Mismatch>) {
    let keys: std::collections::BTreeSet<&Vec<u32>> = lhs.terms().keys().chain(rhs.terms().keys()).collect();
    for e in keys {
        let (a, b) = (lhs.coeff(e), rhs.coeff(e));
        if a != b {
            out.push(Mismatch { exponent: e.clone(), lhs: a.to_string(), rhs: b.to_string(), coords });
        }
    }
}

/// Checks the open mirror identity for divisor `p` of the fixed resolution
/// of `G_{k,l}` to total degree `order`.
pub fn verify_open_mirror(k: i64, l: i64, p: usize, order: u32) -> Result<OpenMirrorReport> {
    let g = GGeometry::new(k, l)?;
    let gp = g_function_g(&g, p, order)?;
    verify_open_mirror_with(&g, p, order, &gp)
}

/// As [`verify_open_mirror`] with `g_p` supplied by the caller. The mirror
/// map is still built from the true g-functions.
pub fn verify_open_mirror_with(g: &GGeometry, p: usize, order: u32, gp: &TruncatedSeries) -> Result<OpenMirrorReport> {
    if order == 0 {
        return Err(GwError::InvalidArgument("order must be at least 1".into()));
    }
    let window = window_of(g, p)?;
    let (adm, center) = admissible_series(g, p, order)?;
    let mm = mirror_map_g(g, order)?;
    let exp_g = gp.exp()?;
    let mut mismatches = Vec::new();
    // hypergeometric side in flat coordinates
    compare(&adm, &exp_g.substitute(&mm.to_kahler())?, "flat", &mut mismatches);
    // admissible side in complex coordinates
    compare(&adm.substitute(&mm.to_complex()?)?, &exp_g, "complex", &mut mismatches);
    Ok(OpenMirrorReport {
        ok: mismatches.is_empty(),
        order,
        k: g.k,
        l: g.l,
        p,
        window,
        center,
        admissible_classes: adm.terms().len(),
        note: (window == Window::E).then(|| E_WINDOW_NOTE.to_string()),
        mismatches,
    })
}

/// Checks that the coefficient of `Z^i` in `prod_{r<m} (1 + q_1..q_r Z)` is
/// `q^{gamma_i}` times the admissible-sequence sum with center `i`, where
/// `gamma_i = sum_{r<i} (i-r) C_r`. This ties the product form of the mirror
/// equation to the open invariants.
pub fn verify_toric_factorization(m: usize) -> Result<bool> {
    if m == 0 {
        return Err(GwError::InvalidArgument("m must be at least 1".into()));
    }
    let vars: Vec<String> = (1..m).map(|i| format!("q{i}")).collect();
    let order = (m * m) as u32;
    // coefficients of the product, as polynomials in q_1..q_{m-1}
    let mut coeffs = vec![TruncatedSeries::one(&vars, order)];
    for r in 0..m {
        let mut e = vec![0u32; vars.len()];
        e[..r].iter_mut().for_each(|x| *x = 1);
        let factor = TruncatedSeries::monomial(&vars, order, e, rat(1, 1));
        let mut next = vec![TruncatedSeries::zero(&vars, order); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] = next[i].add(c)?;
            next[i + 1] = next[i + 1].add(&c.mul(&factor)?)?;
        }
        coeffs = next;
    }
    for (i, c) in coeffs.iter().enumerate() {
        let gamma: Vec<u32> = (1..m).map(|r| if r < i { (i - r) as u32 } else { 0 }).collect();
        let entries: Vec<Vec<u32>> = if i == 0 || i == m {
            vec![vec![0; m - 1]]
        } else {
            enumerate_admissible(m, i, order)?.into_iter().map(|s| s.entries).collect()
        };
        let terms = entries
            .into_iter()
            .map(|s| (s.iter().zip(&gamma).map(|(a, b)| a + b).collect::<Vec<u32>>(), BigRational::one()));
        let expected = TruncatedSeries::from_terms(&vars, order, terms)?;
        if c != &expected {
            return Ok(false);
        }
    }
    Ok(true)
}
