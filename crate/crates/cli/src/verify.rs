//! Re-checks a saved output: reruns its embedded config and compares the
//! lines byte for byte, then re-verifies whatever witnesses it carries.

use std::path::Path;

use anyhow::Context;
use faithful::circuit::Depth4Circuit;
use faithful::hitting::PitVerdict;
use faithful::indep::TrdegCertificate;
use faithful::maps::FaithfulMap;
use faithful::{Error, SparsePoly, Vars};
use serde_json::{json, Value};

use crate::config::{read, PolyList, RunConfig, Task};
use crate::run::{load_circuit, run};

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: &str, ok: bool) {
        self.0.push((name.to_string(), ok));
    }
}

fn field_of(v: &Value) -> anyhow::Result<faithful::FieldSpec> {
    let f = v.get("field").cloned().ok_or_else(|| Error::Json("missing \"field\"".into()))?;
    Ok(serde_json::from_value(f).map_err(Error::from)?)
}

fn text<'a>(v: &'a Value, key: &str) -> anyhow::Result<&'a str> {
    Ok(v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Json(format!("missing or invalid {key:?}")))?)
}

/// Returns the report and whether every check passed.
pub fn verify(path: &Path) -> anyhow::Result<(Value, bool)> {
    let saved: Vec<String> = read(path)?.lines().map(str::to_string).collect();
    let head: Value = serde_json::from_str(saved.first().ok_or_else(|| Error::Json("empty output".into()))?)
        .map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    let cfg = RunConfig::from_json(head.get("config").ok_or_else(|| Error::Json("no \"config\" in output".into()))?)?;

    let mut checks = Checks(Vec::new());
    let mut fresh = Vec::new();
    run(&cfg, &mut |v| {
        fresh.push(serde_json::to_string(&v)?);
        Ok(())
    })
    .context("rerunning the recorded config")?;
    checks.add("rerun-identical", fresh == saved);

    match &cfg.task {
        Task::Pit { input, .. } => {
            let c = load_circuit(input, &cfg)?;
            let verdict = PitVerdict::from_json(&head)?;
            checks.add("witness", verdict.verify(&c));
        }
        Task::Trdeg { input, .. } => {
            let list = PolyList::load(input, &cfg)?;
            let cert = TrdegCertificate::from_json(&head["certificate"], list.field, list.nvars)?;
            checks.add("certificate", cert.verify(&list.polys)?);
            checks.add("r", head["r"].as_u64() == Some(cert.r as u64));
        }
        Task::Annihilator { input, cap } => {
            let list = PolyList::load(input, &cfg)?;
            let a = text(&head, "annihilator")?;
            if a != "none" {
                let a = SparsePoly::parse_with(a, list.field, list.polys.len(), Vars::Y)?;
                checks.add("nonzero", !a.is_zero());
                checks.add("degree", a.degree().is_some_and(|d| d <= *cap));
                checks.add("annihilates", a.substitute(&list.polys)?.is_zero());
            }
        }
        Task::Depth4 { input, .. } => {
            let c = Depth4Circuit::from_json(&read(input)?)?;
            let budget = cfg.budgets.expand_terms;
            let gcd = SparsePoly::parse(text(&head, "gcd_part")?, c.field(), c.nvars())?;
            let simple = Depth4Circuit::from_json(&head["simple"].to_string())?;
            checks.add("gcd-times-simple", &gcd * &simple.expand(budget)? == c.expand(budget)?);
            let cert = TrdegCertificate::from_json(&head["certificates"][0], c.field(), c.nvars())?;
            checks.add("rank-certificate", cert.verify(&c.sparse_set())?);
        }
        Task::Faithful { input, .. } => {
            let list = PolyList::load(input, &cfg)?;
            let map = FaithfulMap::from_json(&head["map"])?;
            let affine = map.affine();
            let images = list.polys.iter().map(|f| affine.apply(f)).collect::<faithful::Result<Vec<_>>>()?;
            let source = TrdegCertificate::from_json(&head["source"], list.field, list.nvars)?;
            let image = TrdegCertificate::from_json(&head["image"], affine.field(), affine.q())?;
            checks.add("source-certificate", source.verify(&list.polys)?);
            checks.add("image-certificate", image.verify(&images)?);
            checks.add("rank-preserved", source.r == image.r && head["r"].as_u64() == Some(source.r as u64));
            checks.add("field", field_of(&head)? == list.field);
        }
        Task::HittingSet { .. } | Task::Corpus { .. } => {}
    }

    let ok = checks.0.iter().all(|(_, ok)| *ok);
    let report = json!({
        "verified": ok,
        "output": path,
        "checks": checks.0.iter().map(|(name, ok)| json!({"check": name, "ok": ok})).collect::<Vec<_>>(),
    });
    Ok((report, ok))
}
