use std::collections::BTreeMap;
use std::path::Path;

use homlab_core::brw::{
    brw_distribution, brw_samples, partial_brw_distribution, partial_brw_samples, std_embed_distribution, EmbedOrder,
    ExactDistribution, PartialEmbedding,
};
use homlab_core::decomp::{
    classify_family, find_strong_decomposition, validate_decomposition, validate_strong, AxiomCheck, SearchBudget,
    TreeDecomposition,
};
use homlab_core::density::{
    cartesian_cycle_audit, codegree_bound_check, extract_min_degree_subgraph, holder_triangle_check, is_locally_dense,
    replacement_convexity_check, subdivision_identity_check, DensityMode, DensityParams,
};
use homlab_core::entropy::{pushforward, tree_entropy_bound, std_entropy_chain, EntropyReport};
use homlab_core::graph::construct::{cartesian_product, k2t_replacement, psi_graph, subdivision};
use homlab_core::graph::io::serialize_graph;
use homlab_core::hom::{
    count_homomorphisms, count_homomorphisms_elimination, count_tree_homomorphisms, cycle_hom_trace, sidorenko_check,
};
use homlab_core::rational::{self, int, ratio};
use homlab_core::report::{AuditReport, Relation};
use homlab_core::{Graph, LabError, Result};
use num_rational::BigRational;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::args::*;
use crate::emit::{record, Record};
use crate::rec;

const DEFAULT_AUDIT_SAMPLES: usize = 100_000;
const DEFAULT_DENSITY_SUBSETS: usize = 10_000;
const CHI_SQUARE_QUANTILE: f64 = 0.999;
const ELIMINATION_TABLE: usize = 1 << 24;

/// What a subcommand produced. `graph_text` is the edge-list rendering used
/// by `construct` in text mode.
#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<Record>,
    pub graph_text: Option<String>,
}

impl Report {
    fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    fn push_audit(&mut self, a: &AuditReport) {
        self.records.push(record(a));
    }
}

fn require_seed(g: &Global) -> Result<u64> {
    g.seed
        .ok_or_else(|| LabError::InvalidParameter("this subcommand is randomized and needs --seed".into()))
}

fn read_decomposition(path: &Path) -> Result<TreeDecomposition> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    TreeDecomposition::from_json(&text)
}

fn parse_anchor(text: &str) -> Result<PartialEmbedding> {
    let bad = || LabError::InvalidParameter(format!("anchor {text:?} is not of the form v=x,v=x"));
    let mut pairs = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (v, x) = part.split_once('=').ok_or_else(bad)?;
        pairs.push((v.trim().parse().map_err(|_| bad())?, x.trim().parse().map_err(|_| bad())?));
    }
    PartialEmbedding::new(pairs)
}

fn budget(global: &Global, max_nodes: u64) -> SearchBudget {
    SearchBudget {
        max_vertices: global.max_n,
        max_nodes,
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let global = &cli.global;
    let mut out = Report::default();
    match &cli.command {
        Command::Construct(a) => construct(a, global, &mut out)?,
        Command::Count(a) => count(a, &mut out)?,
        Command::CheckSidorenko(a) => {
            let (h, g) = (a.h.build()?, a.g.build()?);
            let r = sidorenko_check(&h, &g)?;
            out.push(rec! {
                "check" => "sidorenko",
                "inputs" => format!("H={} G={}", a.h.text, a.g.text),
                "lhs" => r.lhs.to_string(),
                "relation" => ">=",
                "rhs" => rational::format(&r.rhs),
                "verdict" => if r.holds { "holds" } else { "fails" },
                "ratio" => r.ratio.as_ref().map(rational::format),
            });
        }
        Command::Decompose(a) => decompose(a, global, &mut out)?,
        Command::ValidateDecomp(a) => validate(a, &mut out)?,
        Command::Brw(c) => brw(c, global, &mut out)?,
        Command::Entropy(c) => entropy(c, global, &mut out)?,
        Command::Density(c) => density(c, global, &mut out)?,
        Command::Audit(c) => audit(c, global, &mut out)?,
    }
    Ok(out)
}

fn graph_record(g: &Graph) -> Record {
    rec! {"n" => g.n(), "m" => g.num_edges(), "edges" => g.edges()}
}

fn construct(a: &ConstructArgs, global: &Global, out: &mut Report) -> Result<()> {
    let g = a.g.build()?;
    let op = &a.op;
    let (result, labels) = if op.subdivide {
        (subdivision(&g), None)
    } else if let Some(t) = op.replace {
        (k2t_replacement(&g, t)?, None)
    } else if let Some(k) = &op.cartesian {
        (cartesian_product(&g, &k.build()?), None)
    } else if let Some(k) = &op.psi {
        let (psi, labels) = psi_graph(&k.build()?, &g, global.max_hom)?;
        (psi, Some(labels))
    } else {
        (g, None)
    };
    let mut r = graph_record(&result);
    if let Some(labels) = labels {
        r.insert("labels".into(), serde_json::json!(labels));
    }
    out.graph_text = Some(serialize_graph(&result));
    out.push(r);
    Ok(())
}

fn is_cycle(h: &Graph) -> bool {
    h.n() >= 3 && h.is_connected() && (0..h.n()).all(|v| h.degree(v) == 2)
}

fn count(a: &CountArgs, out: &mut Report) -> Result<()> {
    let (h, g) = (a.pair.h.build()?, a.pair.g.build()?);
    let method = match a.method {
        CountMethod::Auto if h.n() > 0 && h.is_tree() => CountMethod::Tree,
        CountMethod::Auto => CountMethod::Backtrack,
        m => m,
    };
    let (name, value) = match method {
        CountMethod::Tree => ("tree", count_tree_homomorphisms(&h, &g)?),
        CountMethod::Trace => {
            if !is_cycle(&h) {
                return Err(LabError::InvalidParameter("the trace method needs H to be a cycle".into()));
            }
            ("trace", cycle_hom_trace(h.n(), &g)?)
        }
        CountMethod::Elimination => ("elimination", count_homomorphisms_elimination(&h, &g, ELIMINATION_TABLE)?),
        _ => ("backtrack", count_homomorphisms(&h, &g)),
    };
    out.push(rec! {
        "inputs" => format!("H={} G={}", a.pair.h.text, a.pair.g.text),
        "method" => name,
        "count" => value.to_string(),
    });
    Ok(())
}

fn decompose(a: &DecomposeArgs, global: &Global, out: &mut Report) -> Result<()> {
    let h = a.h.build()?;
    let budget = budget(global, a.max_nodes);
    let search = find_strong_decomposition(&h, &budget)?;
    let mut r = rec! {
        "inputs" => format!("H={}", a.h.text),
        "found" => search.decomposition.is_some(),
        "exhaustive" => search.exhaustive,
        "nodes" => search.nodes,
    };
    match &search.decomposition {
        Some(d) => {
            let class = classify_family(&h, d, &budget)?;
            r.insert("bags".into(), serde_json::json!(d.bags));
            r.insert("tree_edges".into(), serde_json::json!(d.tree_edges));
            r.insert("reflection_tree".into(), serde_json::json!(class.reflection_tree));
            r.insert(
                "tree_arrangeable_witness".into(),
                serde_json::json!(class.tree_arrangeable_witness),
            );
        }
        None if !search.exhaustive => {
            return Err(LabError::BudgetExceeded(format!(
                "search stopped after {} nodes without an answer",
                search.nodes
            )))
        }
        None => {}
    }
    out.push(r);
    Ok(())
}

fn axiom_row(name: &str, check: &AxiomCheck) -> Record {
    rec! {"axiom" => name, "holds" => check.holds, "witness" => check.witness}
}

fn validate(a: &ValidateArgs, out: &mut Report) -> Result<()> {
    let h = a.h.build()?;
    let d = read_decomposition(&a.decomp)?;
    let diag = if a.strong {
        validate_strong(&h, &d)?
    } else {
        validate_decomposition(&h, &d)?
    };
    out.push(axiom_row("cover_vertices", &diag.axiom_cover_vertices));
    out.push(axiom_row("cover_edges", &diag.axiom_cover_edges));
    out.push(axiom_row("path_connectivity", &diag.axiom_path_connectivity));
    if let Some(c) = &diag.strong_edge_disjoint_trees {
        out.push(axiom_row("edge_disjoint_trees", c));
    }
    if let Some(c) = &diag.strong_iso_condition {
        out.push(axiom_row("iso_condition", c));
    }
    out.push(rec! {
        "check" => if a.strong { "strong_decomposition" } else { "decomposition" },
        "inputs" => format!("H={} decomp={}", a.h.text, a.decomp.display()),
        "verdict" => if diag.is_valid() { "valid" } else { "invalid" },
        "empty_intersections" => diag.empty_intersections,
    });
    Ok(())
}

fn distribution_rows(d: &ExactDistribution, out: &mut Report) {
    for row in d.rows() {
        out.push(record(&row));
    }
}

fn brw(c: &BrwCommand, global: &Global, out: &mut Report) -> Result<()> {
    match c {
        BrwCommand::Sample(a) => {
            let seed = require_seed(global)?;
            let (t, g) = (a.t.build()?, a.g.build()?);
            let count = global.samples.unwrap_or(1);
            let draws = match &a.anchor {
                Some(text) => partial_brw_samples(&t, &g, &parse_anchor(text)?, seed, count, global.max_hom)?,
                None => brw_samples(&t, &g, seed, count)?,
            };
            for (i, h) in draws.iter().enumerate() {
                out.push(rec! {"draw" => i, "map" => h.image()});
            }
        }
        BrwCommand::Dist(a) => {
            let (t, g) = (a.walk.t.build()?, a.walk.g.build()?);
            let d = match (&a.decomp, &a.walk.anchor) {
                (Some(path), _) => {
                    let order = EmbedOrder {
                        root: a.root,
                        reverse_children: a.reverse,
                    };
                    std_embed_distribution(&t, &read_decomposition(path)?, &g, &order, global.max_hom)?
                }
                (None, Some(text)) => partial_brw_distribution(&t, &g, &parse_anchor(text)?, global.max_hom)?,
                (None, None) => brw_distribution(&t, &g, global.max_hom)?,
            };
            distribution_rows(&d, out);
        }
        BrwCommand::Audit(a) => brw_audit(a, global, out)?,
    }
    Ok(())
}

/// Pearson statistic of `observed` against `expected` masses, pooling cells
/// whose expected count is below five. Returns the statistic and the
/// degrees of freedom.
fn chi_square(observed: &[u64], expected: &[f64], total: f64) -> (f64, usize) {
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected) {
        let e = p * total;
        if e < 5.0 {
            pool_obs += o as f64;
            pool_exp += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}

fn brw_audit(a: &AuditWalkArgs, global: &Global, out: &mut Report) -> Result<()> {
    let seed = require_seed(global)?;
    let (t, g) = (a.t.build()?, a.g.build()?);
    let inputs = format!("T={} G={}", a.t.text, a.g.text);
    let d = brw_distribution(&t, &g, global.max_hom)?;
    let total: BigRational = d.probs().iter().sum();
    out.push_audit(&AuditReport::compare("normalization", &inputs, &total, Relation::Eq, &int(1)));

    // Every edge of T lands on a uniform orientation of an edge of G.
    let uniform = ratio(1, 2 * g.num_edges() as u64);
    for &(u, v) in t.edges() {
        let marginal = pushforward(&d, &[u, v]);
        let worst = marginal
            .values()
            .map(|p| if *p > uniform { p - &uniform } else { &uniform - p })
            .max()
            .unwrap_or_else(|| uniform.clone());
        let mut row = AuditReport::compare(format!("edge_marginal[{u}-{v}]"), &inputs, &worst, Relation::Eq, &int(0));
        if marginal.len() != 2 * g.num_edges() {
            row = AuditReport::compare(
                format!("edge_marginal[{u}-{v}]"),
                &inputs,
                &int(marginal.len() as u64),
                Relation::Eq,
                &int(2 * g.num_edges() as u64),
            )
            .with_witness("support size");
        }
        out.push_audit(&row);
    }

    let samples = global.samples.unwrap_or(DEFAULT_AUDIT_SAMPLES);
    if samples == 0 {
        return Err(LabError::InvalidParameter("--samples must be positive".into()));
    }
    let index: BTreeMap<&[usize], usize> = d.iter().enumerate().map(|(i, (h, _))| (h, i)).collect();
    let mut observed = vec![0u64; d.len()];
    for h in brw_samples(&t, &g, seed, samples)? {
        let i = index
            .get(h.image())
            .ok_or_else(|| LabError::InvalidParameter("sampler left the support".into()))?;
        observed[*i] += 1;
    }
    let expected: Vec<f64> = d.probs().iter().map(rational::to_f64).collect();
    let (stat, df) = chi_square(&observed, &expected, samples as f64);
    let critical = if df == 0 {
        0.0
    } else {
        ChiSquared::new(df as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(CHI_SQUARE_QUANTILE)
    };
    let row = AuditReport::compare_f64("chi_square", format!("{inputs} samples={samples} seed={seed}"), stat, Relation::Le, critical, 0.0)
        .with_witness(format!("df={df} quantile={CHI_SQUARE_QUANTILE}"));
    out.push_audit(&row);
    Ok(())
}

fn entropy_rows(r: &EntropyReport, inputs: &str, out: &mut Report) {
    out.push(rec! {
        "inputs" => inputs,
        "entropy_value" => r.entropy_value,
        "lower_bound" => r.lower_bound,
        "slack" => r.slack,
    });
    for term in &r.component_table {
        out.push(record(term));
    }
    for check in &r.checks {
        out.push_audit(check);
    }
}

fn entropy(c: &EntropyCommand, global: &Global, out: &mut Report) -> Result<()> {
    match c {
        EntropyCommand::Tree(a) => {
            let r = tree_entropy_bound(&a.t.build()?, &a.g.build()?, global.max_hom)?;
            entropy_rows(&r, &format!("T={} G={}", a.t.text, a.g.text), out);
        }
        EntropyCommand::Chain(a) => {
            let d = read_decomposition(&a.decomp)?;
            let r = std_entropy_chain(&a.h.build()?, &d, &a.g.build()?, global.max_hom)?;
            entropy_rows(&r, &format!("H={} G={}", a.h.text, a.g.text), out);
        }
    }
    Ok(())
}

fn density(c: &DensityCommand, global: &Global, out: &mut Report) -> Result<()> {
    match c {
        DensityCommand::Local(a) => {
            let g = a.g.build()?;
            let params = DensityParams::new(rational::parse(&a.rho)?, rational::parse(&a.d)?)?;
            let mode = if a.sampled {
                DensityMode::Sampled {
                    subsets: global.samples.unwrap_or(DEFAULT_DENSITY_SUBSETS) as u64,
                    seed: require_seed(global)?,
                }
            } else {
                DensityMode::Exhaustive { max_n: global.max_n }
            };
            let r = is_locally_dense(&g, &params, mode)?;
            let mut row = rec! {
                "inputs" => format!("G={}", a.g.text),
                "rho" => rational::format(&params.rho),
                "d" => rational::format(&params.d),
            };
            row.extend(record(&r));
            out.push(row);
        }
        DensityCommand::Mindeg(a) => {
            let g = a.g.build()?;
            let inputs = format!("G={}", a.g.text);
            let r = extract_min_degree_subgraph(&g)?;
            let mut row = rec! {"inputs" => &inputs};
            row.extend(record(&r));
            out.push(row);
            out.push_audit(&AuditReport::compare(
                "degree_guarantee",
                &inputs,
                &int(4 * r.min_degree as u64),
                Relation::Ge,
                &r.average_degree,
            ));
            out.push_audit(&AuditReport::compare(
                "size_guarantee",
                &inputs,
                &int(64 * r.vertices.len() as u64),
                Relation::Ge,
                &int(g.n() as u64),
            ));
        }
        DensityCommand::Codegree(a) => {
            let g = a.g.build()?;
            let u: Vec<usize> = a.u.clone().unwrap_or_else(|| (0..g.n()).collect());
            let r = codegree_bound_check(&g, &u)?;
            let row = AuditReport::compare(
                "codegree_bound",
                format!("G={} |U|={} delta={}", a.g.text, u.len(), r.delta),
                &rational::from_biguint(&r.lhs),
                Relation::Ge,
                &r.rhs,
            );
            out.push_audit(&row);
        }
    }
    Ok(())
}

fn audit(c: &AuditCommand, global: &Global, out: &mut Report) -> Result<()> {
    let max_terms = global.max_hom as u64;
    match c {
        AuditCommand::Subdivision(a) => {
            out.push_audit(&subdivision_identity_check(&a.h.build()?, &a.g.build()?, max_terms)?);
        }
        AuditCommand::Replacement(a) => {
            for row in replacement_convexity_check(&a.pair.h.build()?, &a.pair.g.build()?, a.t, max_terms)? {
                out.push_audit(&row);
            }
        }
        AuditCommand::Holder(a) => {
            for row in holder_triangle_check(&a.g.build()?, a.r, a.s, a.t)? {
                out.push_audit(&row);
            }
        }
        AuditCommand::Cartesian(a) => {
            let r = cartesian_cycle_audit(&a.h.build()?, a.k, &a.g.build()?, global.max_hom)?;
            out.push(rec! {
                "inputs" => format!("H={} k={} G={}", a.h.text, a.k, a.g.text),
                "v" => r.v,
                "e" => r.e,
                "p" => rational::format(&r.p),
                "alpha" => rational::format(&r.alpha),
                "beta_k" => rational::format(&r.beta_k),
                "degree_regime" => r.degree_regime,
            });
            for check in &r.checks {
                out.push(record(check));
            }
        }
    }
    Ok(())
}
