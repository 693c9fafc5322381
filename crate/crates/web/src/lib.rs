//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes the automaton as JSON text and returns a JSON string;
//! errors come back as a message string.

use permclosure::decomposition::{build_family, default_step_budget};
use permclosure::io::{dfa_from_json, dfa_to_json};
use permclosure::{build_closure, closure::unstable_report, sigma_grid, ClosureOptions, Dfa, Error, GridBox};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest grid the page will draw.
const MAX_CELLS: u128 = 4096;

fn load(automaton: &str) -> Result<Dfa, String> {
    dfa_from_json(automaton).map_err(|e| e.to_string())
}

fn states(set: permclosure::StateSet) -> Vec<usize> {
    set.iter().collect()
}

/// Labels of the box `[0, extents)` as `{"extents", "cells": [{"point", "label", "accepting"}]}`.
#[wasm_bindgen]
pub fn label_grid(automaton: &str, extents: Vec<usize>) -> Result<String, String> {
    let d = load(automaton)?;
    let bounds = GridBox::new(extents).map_err(|e| e.to_string())?;
    if bounds.point_count() > MAX_CELLS {
        return Err(format!("at most {MAX_CELLS} cells can be shown"));
    }
    let grid = sigma_grid(&d, &bounds).map_err(|e| e.to_string())?;
    let finals = d.final_set();
    let cells: Vec<Value> = bounds
        .points()
        .enumerate()
        .map(|(i, p)| {
            let label = grid.label_at(i);
            json!({ "point": p, "label": states(label), "accepting": label.intersects(finals) })
        })
        .collect();
    Ok(json!({ "extents": bounds.extents(), "cells": cells }).to_string())
}

/// Chain automata along `axis` (0-based) for bases `0..count` on every other axis.
#[wasm_bindgen]
pub fn chains(automaton: &str, axis: usize, count: usize) -> Result<String, String> {
    let d = load(automaton)?;
    let k = d.letter_count();
    if axis >= k {
        return Err(format!("axis {} out of range", axis + 1));
    }
    let mut ext = vec![count.max(1); k];
    ext[axis] = 1;
    let region = GridBox::new(ext).map_err(|e| e.to_string())?;
    if region.point_count() > MAX_CELLS {
        return Err(format!("at most {MAX_CELLS} chains can be shown"));
    }
    let family = build_family(&d, axis, &region, default_step_budget(&d, axis, &region))
        .map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for u in family.automata() {
        let p = u.unary_index_period().map_err(|e| e.to_string())?;
        let steps: Vec<Value> = u
            .chain
            .iter()
            .map(|c| json!({ "label": states(c.label), "counter": c.counter }))
            .collect();
        out.push(json!({
            "base": u.base,
            "chain": steps,
            "loop_target": u.loop_target,
            "index": p.index,
            "period": p.period,
        }));
    }
    Ok(Value::Array(out).to_string())
}

/// Runs the closure pipeline: `{"report", "automaton"}`, where `automaton`
/// is null when the phases do not stabilize.
#[wasm_bindgen]
pub fn closure(automaton: &str, raw: bool) -> Result<String, String> {
    let d = load(automaton)?;
    let options = ClosureOptions { raw, ..ClosureOptions::default() };
    match build_closure(&d, &options) {
        Ok(c) => {
            let dfa: Value = serde_json::from_str(&dfa_to_json(&c.dfa)).map_err(|e| e.to_string())?;
            Ok(json!({ "report": c.report, "automaton": dfa }).to_string())
        }
        Err(Error::NotStabilized(_)) => {
            Ok(json!({ "report": unstable_report(&d), "automaton": Value::Null }).to_string())
        }
        Err(e) => Err(e.to_string()),
    }
}
