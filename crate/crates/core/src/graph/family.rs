//! The `name:params` mini-language for naming graphs on the command line.
//!
//! `cycle:n`, `path:n`, `complete:k`, `biclique:s,t`, `star:k`, `empty:n`,
//! `gnp:n,p,seed` (with `p` a fraction or decimal), `file:path`.

use std::path::PathBuf;
use std::str::FromStr;

use super::construct::{build_named_graph, NamedGraph};
use super::io::parse_graph;
use super::Graph;
use crate::error::{LabError, Result};
use crate::rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Named(NamedGraph),
    File(PathBuf),
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            FamilySpec::Named(spec) => build_named_graph(spec),
            FamilySpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| LabError::Parse {
                    line: 0,
                    message: format!("cannot read {}: {e}", path.display()),
                })?;
                parse_graph(&text)
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').ok_or_else(|| {
            LabError::InvalidParameter(format!("graph spec {s:?} is not of the form name:params"))
        })?;
        if name == "file" {
            return Ok(FamilySpec::File(PathBuf::from(params)));
        }
        let fields: Vec<&str> = params.split(',').map(str::trim).collect();
        let arity = |k: usize| {
            if fields.len() == k {
                Ok(())
            } else {
                Err(LabError::InvalidParameter(format!(
                    "{name} takes {k} parameter(s), got {}",
                    fields.len()
                )))
            }
        };
        let size = |i: usize| {
            fields[i].parse::<usize>().map_err(|_| {
                LabError::InvalidParameter(format!("{name}: {:?} is not a size", fields[i]))
            })
        };
        let named = match name {
            "cycle" => {
                arity(1)?;
                NamedGraph::Cycle(size(0)?)
            }
            "path" => {
                arity(1)?;
                NamedGraph::Path(size(0)?)
            }
            "complete" => {
                arity(1)?;
                NamedGraph::Complete(size(0)?)
            }
            "star" => {
                arity(1)?;
                NamedGraph::Star(size(0)?)
            }
            "empty" => {
                arity(1)?;
                NamedGraph::Empty(size(0)?)
            }
            "biclique" => {
                arity(2)?;
                NamedGraph::CompleteBipartite(size(0)?, size(1)?)
            }
            "gnp" => {
                arity(3)?;
                let seed = fields[2].parse::<u64>().map_err(|_| {
                    LabError::InvalidParameter(format!("gnp: {:?} is not a seed", fields[2]))
                })?;
                NamedGraph::Gnp {
                    n: size(0)?,
                    p: rational::parse(fields[1])?,
                    seed,
                }
            }
            other => {
                return Err(LabError::InvalidParameter(format!(
                    "unknown graph family {other:?}"
                )))
            }
        };
        Ok(FamilySpec::Named(named))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families() {
        let g: FamilySpec = "cycle:4".parse().unwrap();
        assert_eq!(g.build().unwrap().num_edges(), 4);
        let g: FamilySpec = "biclique:2,3".parse().unwrap();
        assert_eq!(g.build().unwrap().num_edges(), 6);
        let g: FamilySpec = "gnp:10,1/2,7".parse().unwrap();
        assert_eq!(g.build().unwrap().n(), 10);
        assert!("cycle".parse::<FamilySpec>().is_err());
        assert!("cycle:2".parse::<FamilySpec>().unwrap().build().is_err());
        assert!("widget:3".parse::<FamilySpec>().is_err());
        assert!("biclique:3".parse::<FamilySpec>().is_err());
    }
}
