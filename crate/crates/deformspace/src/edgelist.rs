//! Finite trees as edge lists: one `u v` pair per line, `#` comments, and
//! a lone `v` for an isolated vertex (only meaningful for one-vertex trees).

use std::collections::BTreeSet;

use deformspace_core::treegeom::{FiniteTree, TreeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

pub fn parse_edge_list(text: &str) -> Result<FiniteTree, EdgeListError> {
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse::<u32>).collect();
        let nums = nums.map_err(|e| EdgeListError::Syntax { line: i + 1, message: e.to_string() })?;
        match nums[..] {
            [v] => {
                vertices.insert(v);
            }
            [u, v] => {
                vertices.insert(u);
                vertices.insert(v);
                edges.push((u, v));
            }
            _ => {
                return Err(EdgeListError::Syntax {
                    line: i + 1,
                    message: format!("expected `u v`, found {} fields", nums.len()),
                })
            }
        }
    }
    let vs: Vec<u32> = vertices.into_iter().collect();
    Ok(FiniteTree::new(&vs, &edges)?)
}

pub fn write_edge_list(t: &FiniteTree) -> String {
    if t.len() == 1 {
        return format!("{}\n", t.vertices()[0]);
    }
    t.edges().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}
