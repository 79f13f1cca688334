//! Model specs: `stars:n=..,k=..`, `ladder:n=..`, `bdeg:d=..,n=..`,
//! `apex:n=..`, `stgraph:file=..`, `random:n=..,count=..,seed=..`, or a path
//! to a model file.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempex_core::io::parse_model;
use tempex_core::models::{
    apex_path_model, bounded_degree_model, half_stars, ladder_model, random_catalog, spanning_trees_uniform,
    star_catalog, third_stars,
};
use tempex_core::tree::canonical_edge;
use tempex_core::Model;

use crate::error::{read_file, CliError, Result};

struct Params<'a> {
    spec: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for part in body.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad(spec, format!("expected key=value, got {part:?}")))?;
            values.insert(k.trim(), v.trim());
        }
        Ok(Self { spec, values })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.values.get(key).copied().ok_or_else(|| bad(self.spec, format!("missing {key}")))
    }

    fn num(&self, key: &str) -> Result<usize> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| bad(self.spec, format!("{key}={v} is not a nonnegative integer")))
    }

    fn only(&self, keys: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !keys.contains(k)) {
            Some(k) => Err(bad(self.spec, format!("unexpected parameter {k}"))),
            None => Ok(()),
        }
    }
}

fn bad(spec: &str, reason: String) -> CliError {
    CliError::ModelSpec { spec: spec.to_string(), reason }
}

pub fn load_model(spec: &str) -> Result<Model> {
    let Some((kind, body)) = spec.split_once(':') else {
        return Ok(parse_model(&read_file(spec)?)?);
    };
    let p = Params::parse(spec, body)?;
    let model = match kind {
        "stars" => {
            p.only(&["n", "k"])?;
            let n = p.num("n")?;
            match p.raw("k")? {
                "third" => third_stars(n)?,
                "half" => half_stars(n)?,
                _ => star_catalog(n, p.num("k")?)?,
            }
        }
        "ladder" => {
            p.only(&["n"])?;
            ladder_model(p.num("n")?)?
        }
        "bdeg" => {
            p.only(&["d", "n"])?;
            bounded_degree_model(p.num("d")?, p.num("n")?)?
        }
        "apex" => {
            p.only(&["n"])?;
            apex_path_model(p.num("n")?)?
        }
        "stgraph" => {
            p.only(&["file"])?;
            let (n, edges) = parse_edge_list(spec, &read_file(p.raw("file")?)?)?;
            spanning_trees_uniform(n, &edges)?
        }
        "random" => {
            p.only(&["n", "count", "seed"])?;
            let mut rng = ChaCha8Rng::seed_from_u64(p.num("seed")? as u64);
            random_catalog(p.num("n")?, p.num("count")?, &mut rng)
        }
        other => return Err(bad(spec, format!("unknown model family {other:?}"))),
    };
    Ok(model)
}

/// Whitespace-separated `u v` pairs, one per line; `#` starts a comment. The
/// vertex count is the largest id unless a line `n <count>` declares it.
fn parse_edge_list(spec: &str, text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut n = 0;
    let mut declared = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |s: &str| {
            s.parse::<usize>().map_err(|_| bad(spec, format!("line {}: {s:?} is not a vertex id", lineno + 1)))
        };
        match fields.as_slice() {
            ["n", count] => declared = Some(number(count)?),
            [u, v] => {
                let (u, v) = (number(u)?, number(v)?);
                n = n.max(u).max(v);
                edges.push(canonical_edge(u, v));
            }
            _ => return Err(bad(spec, format!("line {}: expected two vertex ids", lineno + 1))),
        }
    }
    Ok((declared.unwrap_or(n), edges))
}
