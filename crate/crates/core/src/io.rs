//! File formats: automaton JSON, grid TSV, and Graphviz DOT exports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::decomposition::UnaryChainAutomaton;
use crate::error::{Error, Result};
use crate::grid::LabelGrid;

/// On-disk automaton: `delta[j][s]` is the target of state `s` on letter `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub start: usize,
    pub finals: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

impl From<&Dfa> for AutomatonFile {
    fn from(d: &Dfa) -> Self {
        AutomatonFile {
            alphabet: d.alphabet().to_vec(),
            states: d.state_count(),
            start: d.start(),
            finals: d.finals(),
            delta: d.delta().to_vec(),
        }
    }
}

impl TryFrom<AutomatonFile> for Dfa {
    type Error = Error;

    fn try_from(f: AutomatonFile) -> Result<Dfa> {
        Dfa::new(f.alphabet, f.states, f.start, f.finals, f.delta)
    }
}

pub fn dfa_from_json(text: &str) -> Result<Dfa> {
    let file: AutomatonFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.try_into()
}

/// Pretty JSON with one row of `delta` per line.
pub fn dfa_to_json(d: &Dfa) -> String {
    let file = AutomatonFile::from(d);
    let list = |xs: &[usize]| serde_json::to_string(xs).expect("serializable");
    let mut out = String::from("{\n");
    writeln!(out, "  \"alphabet\": {},", serde_json::to_string(&file.alphabet).unwrap()).unwrap();
    writeln!(out, "  \"states\": {},", file.states).unwrap();
    writeln!(out, "  \"start\": {},", file.start).unwrap();
    writeln!(out, "  \"finals\": {},", list(&file.finals)).unwrap();
    out.push_str("  \"delta\": [\n");
    for (j, row) in file.delta.iter().enumerate() {
        let sep = if j + 1 < file.delta.len() { "," } else { "" };
        writeln!(out, "    {}{sep}", list(row)).unwrap();
    }
    out.push_str("  ]\n}\n");
    out
}

fn label_list(label: crate::StateSet) -> String {
    label.iter().map(|s| format!("s{s}")).collect::<Vec<_>>().join(",")
}

/// One tab-separated row per point in lexicographic order: coordinates,
/// then the label as a comma-separated state list.
pub fn grid_tsv(grid: &LabelGrid) -> String {
    let mut out = String::new();
    for (i, p) in grid.bounds().points().enumerate() {
        for x in &p {
            write!(out, "{x}\t").unwrap();
        }
        writeln!(out, "{}", label_list(grid.label_at(i))).unwrap();
    }
    out
}

fn point_id(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("p{}", parts.join("_"))
}

/// The box as a lattice: one node per point, one edge per letter step.
pub fn grid_dot(grid: &LabelGrid) -> String {
    let alphabet = grid.dfa().alphabet();
    let mut out = String::from("digraph labels {\n  node [shape=box];\n");
    for (i, p) in grid.bounds().points().enumerate() {
        let coords: Vec<String> = p.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "  {} [label=\"({})\\n{}\"];",
            point_id(&p),
            coords.join(","),
            grid.label_at(i)
        )
        .unwrap();
    }
    for p in grid.bounds().points() {
        for (j, sym) in alphabet.iter().enumerate() {
            let mut q = p.clone();
            q[j] += 1;
            if grid.bounds().contains(&q) {
                writeln!(out, "  {} -> {} [label=\"{sym}\"];", point_id(&p), point_id(&q)).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// One decomposition chain, drawn left to right with its loop edge.
pub fn chain_dot(u: &UnaryChainAutomaton, alphabet: &[String]) -> String {
    let sym = &alphabet[u.axis];
    let base: Vec<String> = u.base.iter().map(usize::to_string).collect();
    let mut out = format!(
        "digraph chain_{}_{} {{\n  rankdir=LR;\n  node [shape=box];\n  label=\"A_({})^({})\";\n",
        point_id(&u.base),
        u.axis + 1,
        base.join(","),
        u.axis + 1
    );
    for (i, s) in u.chain.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{s}\"];").unwrap();
    }
    for i in 1..u.chain.len() {
        writeln!(out, "  n{} -> n{i} [label=\"{sym}\"];", i - 1).unwrap();
    }
    if let Some(t) = u.loop_target {
        writeln!(out, "  n{} -> n{t} [label=\"{sym}\"];", u.chain.len() - 1).unwrap();
    }
    out.push_str("}\n");
    out
}
