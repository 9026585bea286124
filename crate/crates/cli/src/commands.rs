use std::io::Write;
use std::path::Path;

use clustering_games::equilibria::{
    br_graph_acyclic, price_of_anarchy, BrGraphResult, EquilibriumParams, SearchLimits,
};
use clustering_games::experiments::{
    run_common_color, run_degree_scaling, run_dense_poa, run_sparse_poa, CommonColorConfig,
    DegreeScalingConfig, DensePoaConfig, ExperimentReport, SetFamily, SparsePoaConfig,
};
use clustering_games::generators::{
    bipartite_tightness_instance, chromatic_lb_instance, chromatic_restricted_instance,
    degree_lb_instance, density_lb_instance, matching_lb_instance, random_game, Construction,
    KindMix, MatchingBlock, RandomGameConfig, RationalRange, RuleFamily, StrategySetDistribution,
};
use clustering_games::io::{read_game_file, GameDocument};
use clustering_games::model::{ClusteringGame, StrategyProfile};
use clustering_games::rational::format_rational;
use clustering_games::shapley::{
    build_br_cycle_game, build_no_pne_game, classify_rule, Verdict, Violation,
};
use clustering_games::topology::{
    compute_topology_stats, max_subgraph_density, topological_poa_bounds, BoundValue, EdgeFilter,
    TopologyOptions,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::graphs::GraphSource;
use crate::{
    AnalyzeArgs, BlockName, BrGraphArgs, ClassifyArgs, ConstructionName, ExperimentArgs,
    FamilyName, Format, GenArgs, KindsName, PoaArgs, RuleName, SetsName,
};

fn load(path: &Path) -> Result<GameDocument, CliError> {
    read_game_file(path).map_err(|e| CliError::game(path, e))
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn emit_json(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    write_text(
        &(serde_json::to_string_pretty(value).expect("json values serialize") + "\n"),
        out,
    )
}

/// One header line and one value line; cells are never quoted because every
/// value is a number, a rational or `inf`/`none`.
fn emit_csv(fields: &[(&str, String)], out: Option<&Path>) -> Result<(), CliError> {
    let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
    write_text(
        &format!("{}\n{}\n", header.join(","), values.join(",")),
        out,
    )
}

fn profile_json(s: &StrategyProfile) -> Value {
    json!(s.choices())
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let doc = load(&args.game)?;
    let options = TopologyOptions {
        chromatic: !args.no_chromatic,
        chromatic_cap: args.cap_chromatic,
    };
    let stats = compute_topology_stats(doc.game.graph(), &options)?;
    let out = args.output.out.as_deref();
    let chromatic = stats.chromatic.as_ref().map(|c| c.chromatic_number);
    match args.output.format {
        Format::Json => emit_json(
            &json!({
                "density": format_rational(&stats.density.value),
                "density_witness": stats.density.witness,
                "coord_density": format_rational(&stats.coord_density.value),
                "coord_density_witness": stats.coord_density.witness,
                "max_degree": stats.max_degree,
                "chromatic": chromatic,
                "coloring": stats.chromatic.as_ref().map(|c| &c.colors),
                "matching_size": stats.matching_size(),
                "matching": stats.matching,
            }),
            out,
        ),
        Format::Csv => emit_csv(
            &[
                ("density", format_rational(&stats.density.value)),
                ("coord_density", format_rational(&stats.coord_density.value)),
                ("max_degree", stats.max_degree.to_string()),
                (
                    "chromatic",
                    chromatic.map_or(String::new(), |c| c.to_string()),
                ),
                ("matching_size", stats.matching_size().to_string()),
            ],
            out,
        ),
    }
}

fn bound_json(b: &BoundValue) -> Value {
    match b {
        BoundValue::Value(v) => json!(format_rational(v)),
        BoundValue::NotApplicable(_) => Value::Null,
    }
}

pub fn poa(args: &PoaArgs) -> Result<(), CliError> {
    let doc = load(&args.game)?;
    let game = &doc.game;
    let params = EquilibriumParams::new(args.eps.clone(), args.k)?;
    let limits = SearchLimits {
        max_profiles: args.cap_profiles,
        max_coalition: args.cap_coalition,
    };
    let report = price_of_anarchy(game, &params, &limits)?;
    let bounds = topological_poa_bounds(game, &args.eps, args.k, args.planar);
    let out = args.output.out.as_deref();
    match args.output.format {
        Format::Json => {
            let mut values = serde_json::Map::new();
            let mut reasons = serde_json::Map::new();
            for (name, b) in bounds.named() {
                values.insert(name.into(), bound_json(b));
                if let BoundValue::NotApplicable(reason) = b {
                    reasons.insert(name.into(), json!(reason));
                }
            }
            emit_json(
                &json!({
                    "poa": report.value.to_string(),
                    "eps": format_rational(&args.eps),
                    "k": args.k,
                    "worst_equilibrium": report.worst_equilibrium.as_ref().map(profile_json),
                    "worst_welfare": report.worst_welfare.as_ref().map(format_rational),
                    "optimum": profile_json(&report.optimum),
                    "optimum_welfare": format_rational(&report.optimum_welfare),
                    "bounds": values,
                    "not_applicable": reasons,
                }),
                out,
            )
        }
        Format::Csv => {
            let mut fields = vec![
                ("poa", report.value.to_string()),
                (
                    "worst_welfare",
                    report
                        .worst_welfare
                        .as_ref()
                        .map_or("none".into(), format_rational),
                ),
                ("optimum_welfare", format_rational(&report.optimum_welfare)),
            ];
            for (name, b) in bounds.named() {
                fields.push((name, b.value().map_or(String::new(), format_rational)));
            }
            emit_csv(&fields, out)
        }
    }
}

pub fn br_graph(args: &BrGraphArgs) -> Result<(), CliError> {
    let doc = load(&args.game)?;
    let limits = SearchLimits::with_profiles(args.cap_profiles);
    let value = match br_graph_acyclic(&doc.game, &limits)? {
        BrGraphResult::Acyclic => json!({"result": "acyclic"}),
        BrGraphResult::Cycle(profiles) => {
            json!({"result": "cycle", "cycle": profiles.iter().map(profile_json).collect::<Vec<_>>()})
        }
    };
    emit_json(&value, args.out.as_deref())
}

fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::DigraphCycle { components, edges } => {
            json!({"type": "digraph_cycle", "components": components, "edges": edges})
        }
        Violation::InconsistentCycle {
            nodes,
            edges,
            alpha_h,
        } => json!({
            "type": "inconsistent_cycle", "nodes": nodes, "edges": edges, "alpha_h": format_rational(alpha_h),
        }),
    }
}

pub fn classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let doc = load(&args.game)?;
    let class = classify_rule(doc.game.graph(), doc.game.rule());
    let value = match &class.verdict {
        Verdict::Gws { sigma, gamma } => json!({
            "verdict": "gws",
            "sigma": sigma,
            "gamma": gamma.iter().map(format_rational).collect::<Vec<_>>(),
            "witness": null,
            "components": class.components,
        }),
        Verdict::Violation(v) => json!({
            "verdict": "violation",
            "sigma": null,
            "gamma": null,
            "witness": violation_json(v),
            "components": class.components,
        }),
    };
    emit_json(&value, args.out.as_deref())
}

fn construction_meta(c: &Construction, seed: Option<u64>) -> Value {
    let mut meta = c.meta.clone();
    meta["equilibrium"] = profile_json(&c.equilibrium);
    if let Some(opt) = &c.optimum {
        meta["optimum"] = profile_json(opt);
    }
    if let Some(seed) = seed {
        meta["seed"] = json!(seed);
    }
    meta
}

fn need<T: Copy>(value: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn rule_source(args: &GenArgs, what: &str) -> Result<(ClusteringGame, Violation), CliError> {
    let path = args
        .game
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{what} needs --game (rule source)")))?;
    let game = load(path)?.game;
    let class = classify_rule(game.graph(), game.rule());
    match class.verdict {
        Verdict::Violation(v) => Ok((game, v)),
        Verdict::Gws { .. } => Err(CliError::Usage(format!(
            "{what}: the rule in {} is a generalized weighted Shapley rule; nothing to build",
            path.display()
        ))),
    }
}

pub fn gen(args: &GenArgs) -> Result<(), CliError> {
    let source = || GraphSource {
        family: args.family.as_deref(),
        graph_file: args.graph.as_deref(),
        n: args.n,
        p: args.p.as_ref(),
        d: args.d.as_ref(),
        seed: args.seed,
    };
    let graph_seed = args.n.map(|_| args.seed);
    let doc = match args.construction {
        ConstructionName::BipartiteTightness => {
            let l = need(args.l, "l", "bipartite-tightness")?;
            let r = need(args.r, "r", "bipartite-tightness")?;
            let c = bipartite_tightness_instance(l, r, &args.gamma_l, &args.gamma_r)?;
            GameDocument::with_meta(c.game.clone(), construction_meta(&c, None))
        }
        ConstructionName::DensityLb => {
            let graph = source().load()?;
            let subset = match &args.subset {
                Some(s) => s.clone(),
                None => max_subgraph_density(&graph, EdgeFilter::All).witness,
            };
            let c = density_lb_instance(&graph, &subset)?;
            GameDocument::with_meta(c.game.clone(), construction_meta(&c, graph_seed))
        }
        ConstructionName::MatchingLb => {
            let graph = source().load()?;
            let colors = need(args.c, "c", "matching-lb")?;
            let block = match args.block {
                BlockName::Densest => MatchingBlock::Densest,
                BlockName::Prefix => MatchingBlock::Prefix,
            };
            let inst = matching_lb_instance(&graph, colors, block)?;
            let mut meta = construction_meta(&inst.construction, graph_seed);
            meta["q"] = json!(inst.matching.len());
            meta["matching"] = json!(inst.matching);
            meta["matched_induced_edges"] = json!(inst.matched_induced_edges);
            meta["lower_bound"] = json!(format_rational(&inst.lower_bound()));
            GameDocument::with_meta(inst.construction.game.clone(), meta)
        }
        ConstructionName::ChromaticLb => {
            let graph = source().load()?;
            let c = chromatic_lb_instance(&graph, args.cap_chromatic)?;
            GameDocument::with_meta(c.game.clone(), construction_meta(&c, graph_seed))
        }
        ConstructionName::ChromaticRestricted => {
            let graph = source().load()?;
            let colors = need(args.c, "c", "chromatic-restricted")?;
            let c = chromatic_restricted_instance(&graph, colors, args.cap_chromatic)?;
            GameDocument::with_meta(c.game.clone(), construction_meta(&c, graph_seed))
        }
        ConstructionName::DegreeLb => {
            let graph = source().load()?;
            let c = degree_lb_instance(&graph, &args.eps, args.k)?;
            GameDocument::with_meta(c.game.clone(), construction_meta(&c, graph_seed))
        }
        ConstructionName::BrCycle => {
            let (game, v) = rule_source(args, "br-cycle")?;
            let built = build_br_cycle_game(game.graph(), game.rule(), &v, args.c.unwrap_or(2))?;
            GameDocument::with_meta(
                built,
                json!({"construction": "br-cycle", "violation": violation_json(&v)}),
            )
        }
        ConstructionName::NoPne => {
            let (game, v) = rule_source(args, "no-pne")?;
            let built = build_no_pne_game(game.graph(), game.rule(), &v, args.c.unwrap_or(3))?;
            GameDocument::with_meta(
                built,
                json!({"construction": "no-pne", "violation": violation_json(&v)}),
            )
        }
        ConstructionName::Random | ConstructionName::Plain => {
            let graph = source().load()?;
            let colors = args.c.unwrap_or(2);
            let random = args.construction == ConstructionName::Random;
            let den = args.den;
            let config = RandomGameConfig {
                colors,
                weights: RationalRange::new(1, args.weight_max, den)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
                preferences: match args.pref_max {
                    Some(max) => Some(
                        RationalRange::new(0, max, den)
                            .map_err(|e| CliError::Usage(e.to_string()))?,
                    ),
                    None => None,
                },
                rule: match args.rule {
                    RuleName::EqualSplit => RuleFamily::EqualSplit,
                    RuleName::RandomPositive => RuleFamily::RandomPositive,
                    RuleName::WeightedShapley => RuleFamily::WeightedShapley,
                    RuleName::WithZeros => RuleFamily::WithZeros,
                },
                kinds: match args.kinds {
                    KindsName::Keep => KindMix::Keep,
                    KindsName::Coord => KindMix::AllCoordination,
                    KindsName::Anti => KindMix::AllAnti,
                    KindsName::Mixed => KindMix::Mixed,
                },
                strategy_sets: args.sets.map(|s| match s {
                    SetsName::Uniform => {
                        StrategySetDistribution::UniformNonemptySubsets { c: colors }
                    }
                    SetsName::Pairs => StrategySetDistribution::PairWithCommon { c: colors },
                }),
            };
            let config = if random {
                config
            } else {
                RandomGameConfig {
                    kinds: config.kinds,
                    ..RandomGameConfig::plain(colors)
                }
            };
            let game = random_game(&graph, &config, args.seed)?;
            let name = if random { "random" } else { "plain" };
            GameDocument::with_meta(game, json!({"construction": name, "seed": args.seed}))
        }
    };
    write_text(&doc.to_json(), args.out.as_deref())
}

pub fn experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    let limits = |default: clustering_games::equilibria::SearchLimits| match args.cap_profiles {
        Some(cap) => clustering_games::equilibria::SearchLimits {
            max_profiles: cap,
            ..default
        },
        None => default,
    };
    let report: ExperimentReport = match args.name.as_str() {
        "sparse-poa" => {
            let base = SparsePoaConfig::default();
            run_sparse_poa(&SparsePoaConfig {
                ns: args.ns.clone().unwrap_or(base.ns),
                d: args.d.clone().unwrap_or(base.d),
                trials: args.trials.unwrap_or(base.trials),
                seed: args.seed,
                exact_max_n: args.exact_max_n.unwrap_or(base.exact_max_n),
                colors: args.colors.unwrap_or(base.colors),
                limits: limits(base.limits),
                ..base
            })?
        }
        "dense-poa" => {
            let base = DensePoaConfig::default();
            run_dense_poa(&DensePoaConfig {
                n: args.n.unwrap_or(base.n),
                d: args.d.clone().unwrap_or(base.d),
                cs: args.cs.clone().unwrap_or(base.cs),
                trials: args.trials.unwrap_or(base.trials),
                seed: args.seed,
            })?
        }
        "degree-scaling" => {
            let base = DegreeScalingConfig::default();
            run_degree_scaling(&DegreeScalingConfig {
                ns: args.ns.clone().unwrap_or(base.ns),
                d: args.d.clone().unwrap_or(base.d),
                trials: args.trials.unwrap_or(base.trials),
                seed: args.seed,
                epsilon: args.eps.clone().unwrap_or(base.epsilon),
                k: args.k.unwrap_or(base.k),
                exact_max_n: args.exact_max_n.unwrap_or(base.exact_max_n),
                colors: args.colors.unwrap_or(base.colors),
                limits: limits(base.limits),
                ..base
            })?
        }
        "common-color" => {
            let base = CommonColorConfig::default();
            let family = match args.family {
                Some(FamilyName::SharedPlusPrivate) => SetFamily::SharedPlusPrivate,
                Some(FamilyName::Uniform) | None => SetFamily::Uniform {
                    c: args.colors.unwrap_or(3),
                },
            };
            run_common_color(&CommonColorConfig {
                ns: args.ns.clone().unwrap_or(base.ns),
                d: args.d.clone().unwrap_or(base.d),
                family,
                epsilon: args.eps.clone().unwrap_or(base.epsilon),
                k: args.k.unwrap_or(base.k),
                trials: args.trials.unwrap_or(base.trials),
                seed: args.seed,
                exact_max_n: args.exact_max_n.unwrap_or(base.exact_max_n),
                limits: limits(base.limits),
            })?
        }
        other => {
            return Err(
                clustering_games::experiments::ExperimentError::UnknownExperiment(
                    other.to_string(),
                )
                .into(),
            )
        }
    };
    report.save(&args.out)?;
    emit_json(&report.summary(), None)
}
