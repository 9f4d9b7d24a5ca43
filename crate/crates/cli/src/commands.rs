use std::fmt::Write as _;
use std::io::BufReader;
use std::path::Path;

use kgdbn::corpus::{
    build_cooccurrence, build_dtm, build_graph, embed_cooccurrence, TokenizedCorpus,
};
use kgdbn::dbn::{init_network, reconstruct, topology, train_autoencoder, ModelFile, TrainConfig};
use kgdbn::kgraph::{EtaPolicy, Hierarchy, KnowledgeGraph};
use kgdbn::stats::{derive_seed, sw_columns, sw_pooled, SwReport};
use kgdbn::Dataset;
use serde::Serialize;

use crate::io::{open_input, open_output, write_text};
use crate::reproduce::{self, ReproduceConfig, RunReport, INIT_STREAM, SHUFFLE_STREAM};
use crate::{CliError, Format, TrainingArgs};

fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    Dataset::read_csv(open_input(path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::input(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

#[derive(Serialize)]
struct MultiReport<'a> {
    runs: Vec<&'a RunReport>,
}

pub fn reproduce(
    cfg: ReproduceConfig,
    seeds: usize,
    out: &Path,
    model_out: Option<&Path>,
    format: Format,
) -> Result<(), CliError> {
    if seeds == 0 {
        return Err(CliError::input("--seeds must be at least 1"));
    }
    let outcomes = reproduce::run_many(&cfg, seeds)?;
    if let Some(path) = model_out {
        let first = &outcomes[0];
        let file = ModelFile::from_network(&first.model, Some(first.train_config.clone()));
        file.write(open_output(path)?)?;
    }
    let reports: Vec<&RunReport> = outcomes.iter().map(|o| &o.report).collect();
    match format {
        Format::Text => {
            let text: Vec<String> = reports.iter().map(|r| r.to_text()).collect();
            write_text(out, &text.join("\n"))
        }
        Format::Structured if reports.len() == 1 => write_json(out, reports[0]),
        Format::Structured => write_json(out, &MultiReport { runs: reports }),
    }
}

pub fn train(
    data: &Path,
    out: &Path,
    properties: Option<usize>,
    args: &TrainingArgs,
    shuffle: bool,
) -> Result<(), CliError> {
    let data = read_dataset(data)?;
    if data.rows() == 0 {
        return Err(CliError::input("training data is empty"));
    }
    if let Some(m) = properties {
        if m != data.cols() {
            return Err(CliError::input(format!(
                "--properties {m} but the data has {} columns",
                data.cols()
            )));
        }
    }
    let topo = topology(data.cols())?;
    let cfg = TrainConfig {
        epochs: args.epochs,
        learning_rate: args.lr,
        batch_size: args.batch,
        seed: derive_seed(args.seed, SHUFFLE_STREAM),
        shuffle,
    };
    cfg.validate()?;
    let net = init_network(&topo, derive_seed(args.seed, INIT_STREAM));
    let (net, history) = train_autoencoder(net, &data, &cfg)?;
    ModelFile::from_network(&net, Some(cfg)).write(open_output(out)?)?;
    if let (Some(first), Some(last)) = (history.first(), history.last()) {
        eprintln!(
            "trained {} epochs: loss {first:.6e} -> {last:.6e}",
            history.epoch_loss.len()
        );
    }
    Ok(())
}

pub fn encode(model: &Path, data: &Path, out: &Path) -> Result<(), CliError> {
    let file = ModelFile::read(open_input(model)?)
        .map_err(|e| CliError::input(format!("{}: {e}", model.display())))?;
    let net = file.to_network()?;
    let data = read_dataset(data)?;
    let output = reconstruct(&net, &data)?;
    output.write_csv(open_output(out)?)?;
    Ok(())
}

fn parse_eta(spec: &str) -> Result<EtaPolicy, CliError> {
    if spec.eq_ignore_ascii_case("median") {
        return Ok(EtaPolicy::Median);
    }
    let etas = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::input(format!("bad eta value `{s}`")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(EtaPolicy::Fixed(etas))
}

pub fn hierarchy(graph: &Path, eta: &str, out: &Path) -> Result<(), CliError> {
    let policy = parse_eta(eta)?;
    let g = KnowledgeGraph::from_json(open_input(graph)?)
        .map_err(|e| CliError::input(format!("{}: {e}", graph.display())))?;
    let h = Hierarchy::build(&g, &policy)?;
    if h.is_empty() {
        eprintln!("warning: graph has no entities; hierarchy is a bare root with zero leaves");
    }
    h.write_json(open_output(out)?)?;
    Ok(())
}

pub fn embed(
    corpus: &Path,
    rank: usize,
    out: &Path,
    word_properties: Option<&Path>,
    property_names: Option<&str>,
    graph_out: Option<&Path>,
) -> Result<(), CliError> {
    let corpus = TokenizedCorpus::read(BufReader::new(open_input(corpus)?))?;
    if corpus.vocabulary().is_empty() {
        return Err(CliError::input("corpus has no tokens"));
    }
    let cooc = build_cooccurrence(&build_dtm(&corpus));
    let embedding = embed_cooccurrence(&cooc, rank)?;
    embedding.write_text(open_output(out)?)?;

    if let (Some(props_path), Some(graph_path)) = (word_properties, graph_out) {
        let props = read_dataset(props_path)?;
        let names: Vec<String> = match property_names {
            Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
            None => (1..=props.cols()).map(|i| format!("p{i}")).collect(),
        };
        let graph = build_graph(&embedding, &cooc, &props, &names)?;
        graph.to_json(open_output(graph_path)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SwEmission {
    #[serde(flatten)]
    report: SwReport,
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    columns: Option<Vec<SwReport>>,
}

pub fn swtest(
    data: &Path,
    per_column: bool,
    seed: Option<u64>,
    format: Format,
) -> Result<(), CliError> {
    let dataset = read_dataset(data)?;
    if dataset.as_slice().len() < 3 {
        return Err(CliError::input("Shapiro-Wilk needs at least 3 values"));
    }
    let report = sw_pooled(&dataset)?;
    let columns = if per_column {
        Some(sw_columns(&dataset)?)
    } else {
        None
    };
    let emission = SwEmission {
        report,
        source: data.display().to_string(),
        seed,
        columns,
    };
    let stdout = Path::new("-");
    match format {
        Format::Structured => write_json(stdout, &emission),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "n: {}", emission.report.n).unwrap();
            writeln!(s, "W: {:.5}", emission.report.w).unwrap();
            writeln!(s, "pooled: {}", emission.report.pooled).unwrap();
            writeln!(s, "source: {}", emission.source).unwrap();
            if let Some(seed) = emission.seed {
                writeln!(s, "seed: {seed}").unwrap();
            }
            for (j, c) in emission.columns.iter().flatten().enumerate() {
                writeln!(s, "column {}: n {} W {:.5}", j + 1, c.n, c.w).unwrap();
            }
            write_text(stdout, &s)
        }
    }
}
