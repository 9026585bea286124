//! Graph sources for `gen`: a named family, `G(n, p)`, or the graph of an
//! existing game file.

use std::path::Path;

use clustering_games::generators::{
    complete, complete_bipartite, cycle, gen_gnp, grid, mixed_triangle, path, petersen, star,
    theta, triangle, GnpParams,
};
use clustering_games::io::read_game_file;
use clustering_games::model::Graph;
use clustering_games::rational::Rational;

use crate::error::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number(text: &str, what: &str) -> Result<usize, CliError> {
    text.trim().parse().map_err(|_| {
        usage(format!(
            "{what}: expected a non-negative integer, got {text:?}"
        ))
    })
}

fn pair(text: &str, what: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = text
        .split_once('x')
        .ok_or_else(|| usage(format!("{what}: expected AxB, got {text:?}")))?;
    Ok((number(a, what)?, number(b, what)?))
}

/// `triangle`, `petersen`, `mixed-triangle`, `complete:N`, `cycle:N`,
/// `path:N`, `star:LEAVES`, `grid:RxC`, `bipartite:LxR`, `theta:A,B,C`.
pub fn family(text: &str) -> Result<Graph, CliError> {
    let (name, arg) = match text.split_once(':') {
        Some((name, arg)) => (name, Some(arg)),
        None => (text, None),
    };
    let need =
        || arg.ok_or_else(|| usage(format!("family {name} needs a parameter, e.g. {name}:5")));
    let graph = match name {
        "triangle" => triangle(),
        "petersen" => petersen(),
        "mixed-triangle" => mixed_triangle(),
        "complete" => complete(number(need()?, name)?),
        "cycle" => {
            let n = number(need()?, name)?;
            if n < 3 {
                return Err(usage("cycle needs at least 3 nodes"));
            }
            cycle(n)
        }
        "path" => path(number(need()?, name)?),
        "star" => star(number(need()?, name)?),
        "grid" => {
            let (r, c) = pair(need()?, name)?;
            grid(r, c)
        }
        "bipartite" => {
            let (l, r) = pair(need()?, name)?;
            complete_bipartite(l, r)
        }
        "theta" => {
            let parts: Vec<usize> = need()?
                .split(',')
                .map(|p| number(p, name))
                .collect::<Result<_, _>>()?;
            let inner: [usize; 3] = parts
                .try_into()
                .map_err(|_| usage("theta takes three inner path lengths, e.g. theta:1,1,2"))?;
            if inner.iter().filter(|&&k| k == 0).count() > 1 {
                return Err(usage("theta allows at most one direct hub edge"));
            }
            theta(inner)
        }
        other => return Err(usage(format!("unknown graph family {other:?}"))),
    };
    Ok(graph)
}

pub struct GraphSource<'a> {
    pub family: Option<&'a str>,
    pub graph_file: Option<&'a Path>,
    pub n: Option<usize>,
    pub p: Option<&'a Rational>,
    pub d: Option<&'a Rational>,
    pub seed: u64,
}

impl GraphSource<'_> {
    pub fn load(&self) -> Result<Graph, CliError> {
        let chosen = [
            self.family.is_some(),
            self.graph_file.is_some(),
            self.n.is_some(),
        ];
        if chosen.iter().filter(|&&b| b).count() != 1 {
            return Err(usage(
                "give exactly one of --family, --graph or --n (with --p or --d)",
            ));
        }
        if let Some(text) = self.family {
            return family(text);
        }
        if let Some(path) = self.graph_file {
            return Ok(read_game_file(path)
                .map_err(|e| CliError::game(path, e))?
                .game
                .graph()
                .clone());
        }
        let n = self.n.expect("checked above");
        let params = match (self.p, self.d) {
            (Some(p), None) => GnpParams::dense(n, p.clone(), self.seed)?,
            (None, Some(d)) => GnpParams::sparse(n, d.clone(), self.seed)?,
            _ => {
                return Err(usage(
                    "--n needs exactly one of --p (dense) or --d (sparse, p = d/n)",
                ))
            }
        };
        Ok(gen_gnp(&params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names() {
        assert_eq!(family("complete:4").unwrap().edge_count(), 6);
        assert_eq!(family("grid:2x3").unwrap().edge_count(), 7);
        assert_eq!(family("theta:0,1,2").unwrap().node_count(), 5);
        assert!(family("cycle").is_err());
        assert!(family("wheel:5").is_err());
    }
}
