//! One function per suite. Each runs at a single sampled point and returns
//! its records; resampling on non-generic draws happens in the caller.

use num_traits::Zero;
use serde_json::{json, Map, Value};

use qagt_core::dvir::gaiotto::{
    agt_check, determine_prefactor, f_recursion_residuals, gaiotto_coeffs_in, gaiotto_norm_in,
    gaiotto_pairing_in, NormPrefactor,
};
use qagt_core::dvir::gram::{gram_matrix_in, kac_check, kac_degenerate_point};
use qagt_core::dvir::VermaModule;
use qagt_core::exact::{to_ratio_string, BigRational};
use qagt_core::integral::{iterated_residue, level_check};
use qagt_core::nekrasov::{
    duality_check, g_kernel, pole_report, rectangle_residue, recursion_residual_of, residue_check_with,
    z_level_value, z_pair, LevelTable, PolePair,
};
use qagt_core::partitions::pairs_of_total;
use qagt_core::sampling::Sampler;
use qagt_core::{Error, ParamPoint, RationalFunction, Result};

use crate::config::Suite;
use crate::report::{Record, RecordClass};

const MAX_SIGMA_DRAWS: usize = 16;

/// Fields shared by every record produced at one point.
pub struct Site {
    pub suite: Suite,
    pub index: usize,
    pub point: ParamPoint,
}

impl Site {
    pub fn new(suite: Suite, index: usize, point: ParamPoint) -> Self {
        Self { suite, index, point }
    }

    fn inputs(&self, extra: &[(&str, Value)]) -> Map<String, Value> {
        let mut m = match serde_json::to_value(&self.point) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        };
        m.insert("point".into(), json!(self.index));
        for (k, v) in extra {
            m.insert((*k).into(), v.clone());
        }
        m
    }

    fn record(
        &self,
        level: usize,
        class: RecordClass,
        extra: &[(&str, Value)],
        expected: String,
        actual: String,
        passed: bool,
    ) -> Record {
        Record {
            suite: self.suite,
            level,
            class,
            inputs: self.inputs(extra),
            expected,
            actual,
            passed,
            runtime_ms: None,
        }
    }

    fn compare(&self, level: usize, class: RecordClass, extra: &[(&str, Value)], expected: &BigRational, actual: &BigRational) -> Record {
        self.record(
            level,
            class,
            extra,
            to_ratio_string(expected),
            to_ratio_string(actual),
            expected == actual,
        )
    }
}

fn residual_text(f: &RationalFunction) -> String {
    if f.is_zero() {
        "0".into()
    } else {
        f.to_string()
    }
}

fn partition_value(p: &qagt_core::Partition) -> Value {
    json!(p.parts())
}

pub fn recursion(index: usize, level: usize, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Recursion, index, s.point_qt(level)?);
    let table = LevelTable::build(level, &site.point)?;
    (1..=level)
        .map(|n| {
            let r = recursion_residual_of(&table.levels, n, &site.point)?;
            Ok(site.record(n, RecordClass::Gated, &[], "0".into(), residual_text(&r), r.is_zero()))
        })
        .collect()
}

pub fn poles(index: usize, level: usize, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Poles, index, s.point_qt(level)?);
    let table = LevelTable::build(level, &site.point)?;
    Ok((1..=level)
        .map(|n| {
            let rep = pole_report(table.level(n), n, &site.point);
            let max_mult = rep.roots.iter().map(|(_, m)| *m).max().unwrap_or(0);
            site.record(
                n,
                RecordClass::Gated,
                &[],
                format!("simple poles among {} grid points", rep.grid_size),
                format!(
                    "{} poles, max multiplicity {}, off-grid degree {}",
                    rep.roots.len(),
                    max_mult,
                    rep.unfactored.degree().unwrap_or(0)
                ),
                rep.passed(),
            )
        })
        .collect())
}

pub fn residues(index: usize, level: usize, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Residues, index, s.point_qt(level)?);
    let table = LevelTable::build(level, &site.point)?;
    let mut out = Vec::new();
    for n in 1..=level {
        for pp in PolePair::up_to(n) {
            let (lhs, rhs) = residue_check_with(&table, pp.r, pp.s, n)?;
            let extra = [("check", json!("level")), ("r", json!(pp.r)), ("s", json!(pp.s))];
            out.push(site.compare(n, RecordClass::Gated, &extra, &rhs, &lhs));
        }
    }
    for pp in PolePair::up_to(level).into_iter().filter(|pp| pp.r > 0) {
        let lhs = rectangle_residue(pp.r, pp.s, &site.point)?;
        let rhs = g_kernel(pp.r, pp.s, &site.point)?;
        let extra = [("check", json!("rectangle")), ("r", json!(pp.r)), ("s", json!(pp.s))];
        out.push(site.compare(pp.product(), RecordClass::Gated, &extra, &rhs, &lhs));
    }
    Ok(out)
}

pub fn duality(index: usize, level: usize, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Duality, index, s.point(level)?);
    let q_val = site.point.big_q()?;
    let mut out = Vec::new();
    for n in 0..=level {
        for (l, m) in pairs_of_total(n) {
            let (lhs, rhs) = duality_check(&l, &m, &q_val, &site.point)?;
            let extra = [("lambda", partition_value(&l)), ("mu", partition_value(&m))];
            out.push(site.compare(n, RecordClass::Gated, &extra, &rhs, &lhs));
        }
    }
    Ok(out)
}

pub fn integral(index: usize, level: usize, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Integral, index, s.point(level)?);
    let q_val = site.point.big_q()?;
    let mut out = Vec::new();
    for n in 0..=level {
        for (l, m) in pairs_of_total(n) {
            let i = iterated_residue(&l, &m, &site.point)?;
            let z = z_pair(&l, &m, &q_val, &site.point)?;
            let extra = [
                ("check", json!("pair")),
                ("lambda", partition_value(&l)),
                ("mu", partition_value(&m)),
            ];
            out.push(site.compare(n, RecordClass::Gated, &extra, &z, &i));
        }
        let (lhs, rhs) = level_check(n, &site.point)?;
        out.push(site.compare(n, RecordClass::Gated, &[("check", json!("level"))], &rhs, &lhs));
    }
    Ok(out)
}

/// Kac records at one `(q, t)` and the fitted constants per level.
pub fn kac(index: usize, level: usize, s: &mut Sampler) -> Result<(Vec<Record>, Vec<Option<BigRational>>)> {
    let base = s.point_qt(level)?;
    let mut points: Vec<ParamPoint> = Vec::new();
    for _ in 0..MAX_SIGMA_DRAWS {
        if points.len() == 3 {
            break;
        }
        let pt = base.clone().with_sigma(s.sigma_for(&base, level)?)?;
        if points.iter().all(|p| p.h().ok() != pt.h().ok()) {
            points.push(pt);
        }
    }
    if points.len() < 3 {
        return Err(Error::NonGeneric(format!("no three distinct h values at {base}")));
    }
    let site = Site::new(Suite::Kac, index, base.clone());
    let mut out = Vec::new();
    let mut constants = Vec::new();
    for n in 1..=level {
        let report = kac_check(n, &points)?;
        let ratios: Vec<String> = report.samples.iter().map(|x| to_ratio_string(&x.ratio)).collect();
        let hs: Vec<Value> = report.samples.iter().map(|x| json!(to_ratio_string(&x.h))).collect();
        out.push(site.record(
            n,
            RecordClass::Gated,
            &[("check", json!("h_independence")), ("h", Value::Array(hs))],
            ratios[0].clone(),
            ratios.join(", "),
            report.h_independent,
        ));
        constants.push(report.constant().cloned());
    }
    let degenerate = kac_degenerate_point(1, 1, base.q(), base.t())?;
    let module = VermaModule::new(&degenerate, level)?;
    let dsite = Site::new(Suite::Kac, index, degenerate);
    for n in 1..=level {
        let det = gram_matrix_in(&module, n)?.determinant();
        out.push(dsite.record(
            n,
            RecordClass::Gated,
            &[("check", json!("vanishing")), ("r", json!(1)), ("s", json!(1))],
            "0/1".into(),
            to_ratio_string(&det),
            det.is_zero(),
        ));
    }
    Ok((out, constants))
}

/// Diagnostic comparison of the fitted Kac constants across points.
pub fn kac_constant_diagnostics(per_point: &[(usize, Vec<Option<BigRational>>)]) -> Vec<Record> {
    let Some((_, reference)) = per_point.first() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (index, constants) in per_point.iter().skip(1) {
        for (k, (a, b)) in reference.iter().zip(constants).enumerate() {
            let show = |x: &Option<BigRational>| x.as_ref().map(to_ratio_string).unwrap_or_else(|| "none".into());
            let mut inputs = Map::new();
            inputs.insert("check".into(), json!("qt_independence"));
            inputs.insert("point".into(), json!(index));
            inputs.insert("reference_point".into(), json!(per_point[0].0));
            out.push(Record {
                suite: Suite::Kac,
                level: k + 1,
                class: RecordClass::Diagnostic,
                inputs,
                expected: show(a),
                actual: show(b),
                passed: a.is_some() && a == b,
                runtime_ms: None,
            });
        }
    }
    out
}

pub fn gaiotto(index: usize, level: usize, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Gaiotto, index, s.point(level)?);
    let module = VermaModule::new(&site.point, level)?;
    let solved = match gaiotto_coeffs_in(&module, level) {
        Ok(g) => g,
        Err(e) => {
            return Ok(vec![site.record(
                level,
                RecordClass::Gated,
                &[("check", json!("whittaker"))],
                "unique solution".into(),
                e.to_string(),
                false,
            )])
        }
    };
    (1..=level)
        .map(|n| {
            let norm = gaiotto_norm_in(&module, n)?;
            let pairing = gaiotto_pairing_in(&module, &solved, n)?;
            Ok(site.compare(n, RecordClass::Gated, &[("check", json!("whittaker"))], &norm, &pairing))
        })
        .collect()
}

/// Fixes the norm normalization at level one from the given point.
pub fn agt_normalization(level: usize, s: &mut Sampler) -> Result<(Option<NormPrefactor>, Record)> {
    let site = Site::new(Suite::Agt, 0, s.point(level)?);
    let prefactor = determine_prefactor(&site.point)?;
    let z1 = z_level_value(1, &site.point.big_q()?, &site.point)?;
    let module = VermaModule::new(&site.point, 1)?;
    let norm = gaiotto_norm_in(&module, 1)?;
    let (label, actual) = match prefactor {
        Some(p) => (p.label(), to_ratio_string(&(p.at_level(1, &site.point) * &norm))),
        None => ("undetermined", to_ratio_string(&norm)),
    };
    let record = site.record(
        1,
        RecordClass::Diagnostic,
        &[("check", json!("normalization")), ("prefactor", json!(label))],
        to_ratio_string(&z1),
        actual,
        prefactor.is_some(),
    );
    Ok((prefactor, record))
}

pub fn agt(index: usize, level: usize, prefactor: NormPrefactor, s: &mut Sampler) -> Result<Vec<Record>> {
    let site = Site::new(Suite::Agt, index, s.point(level)?);
    let report = agt_check(level, prefactor, &site.point)?;
    let extra = [("check", json!("norm")), ("prefactor", json!(prefactor.label()))];
    let mut out: Vec<Record> = report
        .levels
        .iter()
        .map(|l| site.compare(l.level, RecordClass::Conjecture, &extra, &l.instanton_side, &l.norm_side))
        .collect();
    let extra = [("check", json!("f_recursion")), ("prefactor", json!(prefactor.label()))];
    match f_recursion_residuals(level, prefactor, &site.point) {
        Ok(residuals) => {
            for (k, r) in residuals.iter().enumerate() {
                out.push(site.record(
                    k + 1,
                    RecordClass::Conjecture,
                    &extra,
                    "0".into(),
                    residual_text(r),
                    r.is_zero(),
                ));
            }
        }
        Err(e) if e.is_non_generic() => return Err(e),
        Err(e) => out.push(site.record(level, RecordClass::Conjecture, &extra, "0".into(), e.to_string(), false)),
    }
    Ok(out)
}
