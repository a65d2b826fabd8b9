//! The one-shot verification suite behind `verify-all`.

use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fibration::vanishing_cycle_counts;
use crate::gw::gfunc::{g_function_g, window_of, Window};
use crate::gw::verify::verify_open_mirror_with;
use crate::gw::verify_toric_factorization;
use crate::lattice::{
    check_kl, deformation_dimensions, enumerate_by_flips, enumerate_maximal_triangulations, make_rectangle,
    make_trapezoid, minkowski_sum, triangulation_count_formula, unit_segment_summands, Family,
};
use crate::mirror::{chamber_product_invariance, transition_consistency_check};
use crate::props::series_properties;
use crate::series::{rat, TruncatedSeries};
use crate::toric::{intersection_rules_check, GGeometry};

/// A deliberate corruption used to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds `1/7 x^2` in the first window variable to `g_p`.
    CorruptG { p: usize },
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub guard: usize,
    pub fault: Option<Fault>,
    /// Seed for the randomized series checks.
    pub seed: u64,
    pub property_cases: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { guard: crate::lattice::DEFAULT_ENUMERATION_GUARD, fault: None, seed: 0, property_cases: 64 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub ok: bool,
    #[serde(skip)]
    pub millis: u128,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyAllReport {
    pub ok: bool,
    pub k: usize,
    pub l: usize,
    pub order: u32,
    pub checks: Vec<CheckResult>,
}

type Check = Result<(bool, Value), String>;

fn run(name: &'static str, out: &mut Vec<CheckResult>, f: impl FnOnce() -> Check) {
    let t = Instant::now();
    let (ok, detail) = f().unwrap_or_else(|e| (false, json!({ "error": e })));
    log::info!("{name}: {} in {:?}", if ok { "pass" } else { "FAIL" }, t.elapsed());
    out.push(CheckResult { name, ok, millis: t.elapsed().as_millis(), detail });
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Default divisor for fault injection: the first divisor with a
/// non-trivial g-function, else 0.
pub fn default_fault_divisor(k: usize, l: usize) -> usize {
    if k >= 2 {
        1
    } else if l >= 2 {
        k + 2
    } else {
        0
    }
}

pub fn corrupted_g(g: &GGeometry, p: usize, order: u32) -> Result<TruncatedSeries, String> {
    let gp = g_function_g(g, p, order).map_err(err)?;
    let vars = g.var_names();
    let slot = match window_of(g, p).map_err(err)? {
        Window::C => g.c_index(if p >= 1 { p } else { 1 }),
        Window::E => g.e_index(p - g.k - 1),
        Window::Corner => g.c0_index(),
    };
    let mut e = vec![0u32; vars.len()];
    e[slot] = 2.min(order);
    let bump = TruncatedSeries::monomial(&vars, order, e, rat(1, 7));
    gp.add(&bump).map_err(err)
}

pub fn verify_all(k: i64, l: i64, order: u32, opts: &VerifyOptions) -> Result<VerifyAllReport, String> {
    let (ku, lu) = check_kl(k, l).map_err(err)?;
    if order == 0 {
        return Err("order must be at least 1".into());
    }
    let mut checks = Vec::new();

    run("triangulation_count", &mut checks, || {
        let poly = make_trapezoid(k, l).map_err(err)?;
        let found = enumerate_maximal_triangulations(&poly, opts.guard).map_err(err)?;
        let flips = enumerate_by_flips(&poly, opts.guard).map_err(err)?;
        let formula = triangulation_count_formula(k, l).map_err(err)?;
        let ok = BigUint::from(found.len()) == formula && found == flips && found.iter().all(|t| t.validate().is_ok());
        Ok((ok, json!({ "enumerated": found.len(), "flip_graph": flips.len(), "formula": formula.to_string() })))
    });

    run("intersection_rules", &mut checks, || {
        let r = intersection_rules_check(k, l).map_err(err)?;
        Ok((r.ok, json!({ "failures": r.failures })))
    });

    run("open_mirror", &mut checks, || {
        let g = GGeometry::new(k, l).map_err(err)?;
        let mut reports = Vec::new();
        let mut ok = true;
        for p in 0..g.n_height_one() {
            let gp = match opts.fault {
                Some(Fault::CorruptG { p: fp }) if fp == p => corrupted_g(&g, p, order)?,
                _ => g_function_g(&g, p, order).map_err(err)?,
            };
            let r = verify_open_mirror_with(&g, p, order, &gp).map_err(err)?;
            ok &= r.ok;
            reports.push(serde_json::to_value(&r).map_err(err)?);
        }
        Ok((ok, json!({ "divisors": reports })))
    });

    run("toric_factorization", &mut checks, || {
        let a = verify_toric_factorization(ku).map_err(err)?;
        let b = verify_toric_factorization(lu).map_err(err)?;
        Ok((a && b, json!({ "m=k": a, "m=l": b })))
    });

    run("chamber_product_invariance", &mut checks, || {
        let r = chamber_product_invariance(ku, lu).map_err(err)?;
        Ok((r.ok, serde_json::to_value(&r).map_err(err)?))
    });

    run("transition_consistency", &mut checks, || {
        let r = transition_consistency_check(ku, lu).map_err(err)?;
        Ok((r.ok, serde_json::to_value(&r).map_err(err)?))
    });

    run("minkowski_identity", &mut checks, || {
        let sum = minkowski_sum(&unit_segment_summands(ku, lu)).map_err(err)?;
        let rect = make_rectangle(k, l).map_err(err)?;
        Ok((sum == rect, json!({ "vertices": sum.vertices() })))
    });

    run("dimension_bookkeeping", &mut checks, || {
        let dg = deformation_dimensions(Family::Generalized, k, l).map_err(err)?;
        let doo = deformation_dimensions(Family::Orbifolded, k, l).map_err(err)?;
        let cg = vanishing_cycle_counts(Family::Generalized, ku, lu).map_err(err)?;
        let co = vanishing_cycle_counts(Family::Orbifolded, ku, lu).map_err(err)?;
        let g = GGeometry::new(k, l).map_err(err)?;
        let ok = cg.s3 as u64 == dg.complex_dim
            && dg.kahler_dim == g.basis.len() as u64
            && doo.complex_dim == dg.kahler_dim
            && doo.kahler_dim == dg.complex_dim
            && co.s3 == 1
            && co.s1xs2 == ku + lu - 2;
        Ok((ok, json!({ "G": dg, "O": doo, "cycles_G": cg, "cycles_O": co })))
    });

    run("series_properties", &mut checks, || {
        let r = series_properties(opts.seed, opts.property_cases, order.min(6));
        Ok((r.ok, serde_json::to_value(&r).map_err(err)?))
    });

    Ok(VerifyAllReport { ok: checks.iter().all(|c| c.ok), k: ku, l: lu, order, checks })
}
