use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use verbprobe::analysis::{
    aggregate_attention_by_pos, entropy, ks_two_sample, match_rate, pearson, spearman, variance, AnalysisError,
    AnswerPair, AttentionObservation, PosAttentionRow, PosCategory, ScoredAnswer,
};
use verbprobe::perturb::Strategy;
use verbprobe::qamodel::{AnswerPrediction, ProbeTrace};
use verbprobe::report::{
    match_report_table, pos_attention_table, render_heatmap_batch, render_scatter, HeatmapSpec, ScatterLabels,
    Table,
};
use verbprobe::textproc::TaggedQuestion;

use crate::common::{ensure_dir, file_stem, write_json, write_table, write_text, Warnings};
use crate::GlobalArgs;

pub const TRACES_FILE: &str = "traces.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";

/// Category pairs compared with the two-sample KS test on |attention logit|.
const KS_PAIRS: [(PosCategory, PosCategory); 5] = [
    (PosCategory::TotalNouns, PosCategory::TotalVerbs),
    (PosCategory::TotalNouns, PosCategory::OtherPos),
    (PosCategory::TotalVerbs, PosCategory::OtherPos),
    (PosCategory::NeNouns, PosCategory::NonNeNouns),
    (PosCategory::AuxVerbs, PosCategory::NonAuxVerbs),
];

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Trace file written by `probe`; defaults to the one in --out-dir.
    #[arg(long)]
    pub traces: Option<PathBuf>,
    /// Comma-separated question words to draw hidden-layer heatmaps for.
    #[arg(long, value_delimiter = ',')]
    pub heatmap_words: Vec<String>,
}

/// One question run through the reader.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariantTrace {
    pub question: String,
    pub tagged: TaggedQuestion,
    pub answer: AnswerPrediction,
    pub trace: ProbeTrace,
}

/// One line of `traces.jsonl`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub id: String,
    pub strategy: Strategy,
    pub original: VariantTrace,
    pub perturbed: VariantTrace,
}

#[derive(Debug, Serialize)]
struct KsRow {
    sample_a: &'static str,
    sample_b: &'static str,
    n_a: usize,
    n_b: usize,
    d: Option<f64>,
    p: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Notes {
    attention: &'static str,
    entropy: &'static str,
    variance: &'static str,
    ks_test: &'static str,
    named_entities: &'static str,
}

const NOTES: Notes = Notes {
    attention: "mean |attention logit|: absolute pre-softmax question self-attention scores, pooled over tokens",
    entropy: "entropy (natural log) of the distribution |h_i| / sum_j |h_j| over the last LSTM layer's hidden vector of each question token",
    variance: "population variance of the last LSTM layer's hidden vector of each question token",
    ks_test: "two-sample Kolmogorov-Smirnov test on per-token |attention logit| samples, two-sided asymptotic p",
    named_entities: "named-entity nouns are detected by a capitalization heuristic, not by a trained recognizer",
};

#[derive(Debug, Serialize)]
pub struct Summary {
    pub questions: usize,
    pub matched: usize,
    /// Rounded to three decimals.
    pub match_rate: f64,
    pub mean_certainty_original: f64,
    pub mean_certainty_perturbed: f64,
    pub strategies: BTreeMap<&'static str, usize>,
    /// One-based index of the layer the series are computed on.
    pub hidden_layer: usize,
    pub series_points: usize,
    pub pearson_entropy_attention: Option<f64>,
    pub spearman_entropy_attention: Option<f64>,
    pub pearson_variance_attention: Option<f64>,
    pub spearman_variance_attention: Option<f64>,
    pos_attention: Vec<PosAttentionRow>,
    ks_tests: Vec<KsRow>,
    notes: Notes,
}

pub fn run(global: &GlobalArgs, args: ReportArgs, warnings: &mut Warnings) -> Result<()> {
    let path = args.traces.unwrap_or_else(|| global.out_dir.join(TRACES_FILE));
    let records = read_traces(&path)?;
    let summary = build(&records, &args.heatmap_words, global, warnings)?;
    print_summary(&summary);
    Ok(())
}

pub fn read_traces(path: &Path) -> Result<Vec<ProbeRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(line).with_context(|| format!("{} line {}", path.display(), n + 1))?;
        records.push(r);
    }
    if records.is_empty() {
        bail!("{} holds no probe records", path.display());
    }
    Ok(records)
}

pub fn print_summary(s: &Summary) {
    let show = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.3}"));
    println!("questions                    {}", s.questions);
    println!("match rate                   {:.3}", s.match_rate);
    println!("mean certainty original      {:.3}", s.mean_certainty_original);
    println!("mean certainty perturbed     {:.3}", s.mean_certainty_perturbed);
    println!("pearson entropy/attention    {}", show(s.pearson_entropy_attention));
    println!("pearson variance/attention   {}", show(s.pearson_variance_attention));
    println!("spearman variance/attention  {}", show(s.spearman_variance_attention));
}

fn stat(name: &str, r: Result<f64, AnalysisError>, warnings: &mut Warnings) -> Option<f64> {
    r.map_err(|e| warnings.push("analysis", format!("{name}: {e}"))).ok()
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Computes every statistic over `records` and writes tables, summary and
/// figures into the output directory.
pub fn build(
    records: &[ProbeRecord],
    heatmap_words: &[String],
    global: &GlobalArgs,
    warnings: &mut Warnings,
) -> Result<Summary> {
    let out = &global.out_dir;
    let format = global.format.into();
    ensure_dir(out)?;

    let pairs: Vec<AnswerPair> = records
        .iter()
        .map(|r| AnswerPair {
            id: r.id.clone(),
            original: ScoredAnswer { text: r.original.answer.text.clone(), certainty: r.original.answer.certainty },
            perturbed: ScoredAnswer { text: r.perturbed.answer.text.clone(), certainty: r.perturbed.answer.certainty },
        })
        .collect();
    let matches = match_rate(&pairs)?;
    write_table(out, "match_report", &match_report_table(&matches), format)?;

    let pos = aggregate_attention_by_pos(records.iter().map(|r| AttentionObservation {
        id: &r.id,
        tagged: &r.original.tagged,
        logits: &r.original.trace.attention_logits,
    }))?;
    write_table(out, "pos_attention", &pos_attention_table(&pos), format)?;

    // per-token series over the last hidden layer of original questions
    let layer = records[0].original.trace.hidden.len();
    if layer == 0 {
        bail!("probe traces carry no hidden layers");
    }
    let mut series = Table::new(&["id", "token_index", "token", "pos", "abs_attention_logit", "entropy", "variance"]);
    let (mut xs, mut ent, mut var) = (Vec::new(), Vec::new(), Vec::new());
    let mut degenerate = 0;
    let mut samples: BTreeMap<PosCategory, Vec<f64>> = BTreeMap::new();
    for r in records {
        let t = &r.original.trace;
        if t.hidden.len() != layer {
            bail!("question {}: {} hidden layers, expected {layer}", r.id, t.hidden.len());
        }
        for (j, token) in r.original.tagged.tokens.iter().enumerate() {
            let x = t.attention_logits[j].abs();
            for cat in PosCategory::of(token) {
                samples.entry(*cat).or_default().push(x);
            }
            let h = &t.hidden[layer - 1][j];
            let e = match entropy(h) {
                Ok(e) => e,
                Err(_) => {
                    degenerate += 1;
                    continue;
                }
            };
            let v = variance(h)?;
            series.push(vec![
                r.id.clone().into(),
                j.into(),
                token.surface.clone().into(),
                token.pos.as_str().into(),
                x.into(),
                e.into(),
                v.into(),
            ])?;
            xs.push(x);
            ent.push(e);
            var.push(v);
        }
    }
    if degenerate > 0 {
        warnings.push("analysis", format!("{degenerate} tokens with all-zero hidden vectors left out of the series"));
    }
    write_table(out, "series", &series, format)?;

    let pearson_entropy = stat("pearson_entropy_attention", pearson(&xs, &ent), warnings);
    let spearman_entropy = stat("spearman_entropy_attention", spearman(&xs, &ent), warnings);
    let pearson_variance = stat("pearson_variance_attention", pearson(&xs, &var), warnings);
    let spearman_variance = stat("spearman_variance_attention", spearman(&xs, &var), warnings);

    let mut ks_rows = Vec::new();
    let mut ks_table = Table::new(&["sample_a", "sample_b", "n_a", "n_b", "d", "p"]);
    for (a, b) in KS_PAIRS {
        let sa = samples.get(&a).map_or(&[][..], Vec::as_slice);
        let sb = samples.get(&b).map_or(&[][..], Vec::as_slice);
        let ks = ks_two_sample(sa, sb)
            .map_err(|e| warnings.push("analysis", format!("KS {} vs {}: {e}", a.as_str(), b.as_str())))
            .ok();
        let row = KsRow {
            sample_a: a.as_str(),
            sample_b: b.as_str(),
            n_a: sa.len(),
            n_b: sb.len(),
            d: ks.map(|k| k.d),
            p: ks.map(|k| k.p),
        };
        ks_table.push(vec![
            row.sample_a.into(),
            row.sample_b.into(),
            row.n_a.into(),
            row.n_b.into(),
            row.d.into(),
            row.p.into(),
        ])?;
        ks_rows.push(row);
    }
    write_table(out, "ks_tests", &ks_table, format)?;

    let annotate = |p: Option<f64>, s: Option<f64>| {
        let show = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.3}"));
        format!("Pearson r = {}, Spearman rho = {}", show(p), show(s))
    };
    if xs.is_empty() {
        warnings.push("report", "no series points; scatterplots skipped");
    } else {
        for (name, ys, p, s) in [
            ("entropy", &ent, pearson_entropy, spearman_entropy),
            ("variance", &var, pearson_variance, spearman_variance),
        ] {
            let labels = ScatterLabels {
                title: format!("{name} of layer {layer} hidden vectors vs attention"),
                x_label: "abs attention logit".into(),
                y_label: name.into(),
                annotation: Some(annotate(p, s)),
            };
            write_text(&out.join(format!("scatter_{name}.svg")), &render_scatter(&xs, ys, &labels)?)?;
        }
    }

    let specs: Vec<HeatmapSpec> = heatmap_words
        .iter()
        .filter_map(|w| {
            let found = records.iter().find_map(|r| {
                let t = &r.original.trace;
                let j = t.question_tokens.iter().position(|s| s.eq_ignore_ascii_case(w))?;
                Some(HeatmapSpec { word: t.question_tokens[j].clone(), values: t.hidden.iter().map(|l| l[j].clone()).collect() })
            });
            if found.is_none() {
                warnings.push("report", format!("heatmap word {w:?} occurs in no question"));
            }
            found
        })
        .collect();
    for (spec, svg) in specs.iter().zip(render_heatmap_batch(&specs)?) {
        write_text(&out.join(format!("heatmap_{}.svg", file_stem(&spec.word))), &svg)?;
    }

    let mut strategies: BTreeMap<&'static str, usize> = Strategy::ALL.iter().map(|s| (s.as_str(), 0)).collect();
    for r in records {
        *strategies.entry(r.strategy.as_str()).or_default() += 1;
    }
    let summary = Summary {
        questions: matches.total,
        matched: matches.matched,
        match_rate: round3(matches.match_rate),
        mean_certainty_original: matches.mean_certainty_original,
        mean_certainty_perturbed: matches.mean_certainty_perturbed,
        strategies,
        hidden_layer: layer,
        series_points: xs.len(),
        pearson_entropy_attention: pearson_entropy,
        spearman_entropy_attention: spearman_entropy,
        pearson_variance_attention: pearson_variance,
        spearman_variance_attention: spearman_variance,
        pos_attention: pos.rows,
        ks_tests: ks_rows,
        notes: NOTES,
    };
    write_json(&out.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}
