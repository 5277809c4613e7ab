//! `dbrank`: encode permutations as DNA profile vectors and back.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dbrank_core::codebook::{code_sizes, length_bounds, verify_length, SizeEntry};
use dbrank_core::codec::{self, Message, Mode};
use dbrank_core::feasibility::{
    dyck_report, enumerate_feasible, is_feasible_ranking, is_feasible_vector, ranking_from_vector,
    DyckMode, EnumerateOptions,
};
use dbrank_core::frame::FRAME_ALGORITHM;
use dbrank_core::json::{
    from_json_str, to_json_string, FrameJson, ParamsJson, ProfileJson, RankingJson, SizesJson,
};
use dbrank_core::sequence::{profile_vector, realize_string};
use dbrank_core::{Alphabet, CodeParams, DeBruijnGraph, EncodingFrame, Error, TieBreakMode};

fn long_version() -> &'static str {
    Box::leak(
        format!("{} (frames: {FRAME_ALGORITHM})", env!("CARGO_PKG_VERSION")).into_boxed_str(),
    )
}

#[derive(Parser)]
#[command(name = "dbrank", version = long_version(), about = "Rank-modulation codes over DNA profile vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ParamArgs {
    /// Alphabet size.
    #[arg(long)]
    q: Option<usize>,
    /// Gram length ℓ.
    #[arg(long = "l")]
    l: Option<usize>,
    /// Symbols in digit order, e.g. ACGT. Defaults to ACGT prefixes or A..Z.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Args)]
struct FrameArgs {
    /// Frame JSON; the default frame is generated when omitted.
    #[arg(long)]
    frame: Option<PathBuf>,
    /// Tie-break cycles for generated frames: first-occurrence or reverse-edge.
    #[arg(long)]
    tie_break: Option<String>,
    /// systematic, selfloop, firstnode, firstnode-selfloop or full.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct OutputArg {
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Ranking JSON → profile JSON.
    Encode {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Profile JSON → ranking JSON of the information set.
    Decode {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Profile JSON → a string with that profile.
    Realize {
        #[arg(long)]
        profile: PathBuf,
        /// FASTA-style output (q = 4, alphabet ACGT).
        #[arg(long)]
        fasta: bool,
        #[command(flatten)]
        out: OutputArg,
    },
    /// String → profile JSON.
    Profile {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        string: Option<String>,
        /// Read the string from a file (whitespace and FASTA headers ignored).
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Decide feasibility of a total ranking (LP) or of a profile vector.
    Feasible {
        #[arg(long, short, conflicts_with = "profile", required_unless_present = "profile")]
        input: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Per-subset Dyck configuration report for a total ranking.
    CheckDyck {
        #[arg(long, short)]
        input: PathBuf,
        /// Every non-empty proper vertex subset instead of singletons.
        #[arg(long)]
        all_subsets: bool,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Count feasible rankings by exhaustive LP.
    Enumerate {
        #[command(flatten)]
        params: ParamArgs,
        /// Only count; otherwise rankings are written as JSON lines to --output.
        #[arg(long)]
        count_only: bool,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        parallel: usize,
        /// Call the LP on every ranking, skipping the Dyck prefilter.
        #[arg(long)]
        no_prefilter: bool,
        /// Allow q^ℓ > 9.
        #[arg(long)]
        override_guard: bool,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Code sizes, rates and length bounds.
    Sizes {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        #[arg(long)]
        table: bool,
    },
    /// Encode → realize → profile → decode self-test.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        frame: FrameArgs,
        /// Ranking JSON; a random message is drawn when omitted.
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Seed for the random message.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Profile JSON the encoder output must equal.
        #[arg(long)]
        expect: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &OutputArg, text: &str) -> CliResult {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("standard output: {e}"))),
    }
}

fn emit_json(out: &OutputArg, v: &impl serde::Serialize) -> CliResult {
    emit(out, &to_json_string(v))
}

fn params_from_args(a: &ParamArgs) -> CliResult<Option<CodeParams>> {
    match (a.q, a.l) {
        (None, None) if a.alphabet.is_none() => Ok(None),
        (q, Some(l)) => {
            let alphabet = match (&a.alphabet, q) {
                (Some(s), _) => Alphabet::new(s.chars())?,
                (None, Some(q)) => Alphabet::default_for(q)?,
                (None, None) => return Err(Failure::Usage("--q or --alphabet is required".into())),
            };
            if q.is_some_and(|q| q != alphabet.len()) {
                return Err(Error::InvalidParams("--q does not match --alphabet".into()).into());
            }
            Ok(Some(CodeParams::with_alphabet(alphabet, l)?))
        }
        _ => Err(Failure::Usage("--l is required together with --q/--alphabet".into())),
    }
}

/// Flags win; a document's own parameters must agree with them.
fn resolve_params(a: &ParamArgs, doc: &ParamsJson) -> CliResult<CodeParams> {
    let from_doc = doc.to_params()?;
    match params_from_args(a)? {
        Some(p) if p != from_doc => Err(Error::DomainMismatch(format!(
            "flags give q={} ℓ={} but the input has q={} ℓ={}",
            p.q(),
            p.ell(),
            from_doc.q(),
            from_doc.ell()
        ))
        .into()),
        _ => Ok(from_doc),
    }
}

fn required_params(a: &ParamArgs) -> CliResult<CodeParams> {
    params_from_args(a)?.ok_or_else(|| Failure::Usage("--q and --l are required".into()))
}

fn resolve_frame(
    a: &FrameArgs,
    params: &CodeParams,
    embedded: Option<&FrameJson>,
) -> CliResult<EncodingFrame> {
    let frame = if let Some(path) = &a.frame {
        from_json_str::<FrameJson>(&read(path)?)?.to_frame()?
    } else if let (Some(f), None) = (embedded, &a.tie_break) {
        f.to_frame()?
    } else {
        let default = EncodingFrame::default_for(params)?;
        match &a.tie_break {
            None => default,
            Some(m) => EncodingFrame::new(
                params,
                default.alpha().to_vec(),
                default.beta().to_vec(),
                TieBreakMode::parse(m)?,
            )?,
        }
    };
    if frame.params() != params {
        return Err(Error::DomainMismatch("frame parameters differ from the input".into()).into());
    }
    Ok(frame)
}

fn resolve_mode(a: &FrameArgs, embedded: Option<&str>) -> CliResult<Mode> {
    Ok(Mode::parse(a.mode.as_deref().or(embedded).unwrap_or("systematic"))?)
}

fn read_message(path: &Path, params: &ParamArgs) -> CliResult<(CodeParams, RankingJson)> {
    let doc: RankingJson = from_json_str(&read(path)?)?;
    let p = resolve_params(params, &doc.params)?;
    Ok((p, doc))
}

fn message(doc: &RankingJson, g: &DeBruijnGraph) -> CliResult<Message> {
    Ok(Message {
        ranks: doc.ranking(g)?,
        loops: doc.loop_ranks(g)?,
    })
}

fn encode_cmd(params: &ParamArgs, fa: &FrameArgs, input: &Path, out: &OutputArg) -> CliResult {
    let (p, doc) = read_message(input, params)?;
    let frame = resolve_frame(fa, &p, None)?;
    let mode = resolve_mode(fa, None)?;
    let x = codec::encode(&frame, mode, &message(&doc, frame.graph())?)?;
    emit_json(out, &ProfileJson::new(&x)?.with_origin(&frame, mode.name()))
}

fn decode_cmd(fa: &FrameArgs, input: &Path, out: &OutputArg) -> CliResult {
    let doc: ProfileJson = from_json_str(&read(input)?)?;
    let x = doc.to_weights()?;
    let frame = resolve_frame(fa, x.params(), doc.frame.as_ref())?;
    let mode = resolve_mode(fa, doc.mode.as_deref())?;
    let msg = codec::decode(&frame, mode, &x)?;
    emit_json(out, &RankingJson::new(x.params(), &msg.ranks, msg.loops.as_ref()))
}

fn realize_cmd(profile: &Path, fasta: bool, out: &OutputArg) -> CliResult {
    let doc: ProfileJson = from_json_str(&read(profile)?)?;
    let x = doc.to_weights()?;
    let s = realize_string(&x)?;
    let text = if fasta {
        let p = x.params();
        if p.q() != 4 || !p.alphabet().is_default() {
            return Err(Error::InvalidParams("FASTA output needs q = 4 over ACGT".into()).into());
        }
        let mut t = format!(">dbrank l={} length={}\n", p.ell(), s.len());
        for line in s.as_bytes().chunks(80) {
            t.push_str(std::str::from_utf8(line).expect("ASCII"));
            t.push('\n');
        }
        t
    } else {
        s + "\n"
    };
    emit(out, &text)
}

fn profile_cmd(
    params: &ParamArgs,
    string: Option<&str>,
    input: Option<&Path>,
    out: &OutputArg,
) -> CliResult {
    let s: String = match (string, input) {
        (Some(s), _) => s.to_string(),
        (None, Some(path)) => read(path)?
            .lines()
            .filter(|l| !l.starts_with('>'))
            .flat_map(|l| l.chars())
            .filter(|c| !c.is_whitespace())
            .collect(),
        (None, None) => return Err(Failure::Usage("--string or --input is required".into())),
    };
    emit_json(out, &ProfileJson::new(&profile_vector(&profile_params(params, &s)?, &s)?)?)
}

/// `--q` may be left out of `profile`: the smallest default alphabet that
/// covers the string is used.
fn profile_params(a: &ParamArgs, s: &str) -> CliResult<CodeParams> {
    let l = a.l.ok_or_else(|| Failure::Usage("--l is required".into()))?;
    if a.q.is_none() && a.alphabet.is_none() {
        return Ok(CodeParams::with_alphabet(Alphabet::infer(s)?, l)?);
    }
    required_params(a)
}

fn feasible_cmd(input: Option<&Path>, profile: Option<&Path>, out: &OutputArg) -> CliResult {
    if let Some(path) = profile {
        let doc: ProfileJson = from_json_str(&read(path)?)?;
        let x = doc.to_weights()?;
        return emit_json(out, &json!({ "feasible": is_feasible_vector(&x)? }));
    }
    let path = input.ok_or_else(|| Failure::Usage("--input or --profile is required".into()))?;
    let (p, doc) = read_message(path, &ParamArgs::default())?;
    let g = DeBruijnGraph::new(p.clone());
    let pi = doc.ranking(&g)?;
    let verdict = match is_feasible_ranking(&p, &pi)? {
        Some(w) => json!({
            "feasible": true,
            "witness": serde_json::to_value(ProfileJson::new(&w.profile)?).expect("serializable"),
        }),
        None => json!({ "feasible": false, "witness": Value::Null }),
    };
    emit_json(out, &verdict)
}

fn check_dyck_cmd(input: &Path, all: bool, out: &OutputArg) -> CliResult {
    let (p, doc) = read_message(input, &ParamArgs::default())?;
    let g = DeBruijnGraph::new(p.clone());
    let pi = doc.ranking(&g)?;
    let mode = if all { DyckMode::AllSubsets } else { DyckMode::Singletons };
    let findings = dyck_report(&p, &pi, mode)?;
    let subsets: Vec<Value> = findings
        .iter()
        .map(|f| {
            json!({
                "vertices": f.subset.iter().map(|&v| g.vertex_gram(v)).collect::<Vec<_>>(),
                "word": f.word,
                "dyck": f.dyck,
            })
        })
        .collect();
    emit_json(
        out,
        &json!({
            "q": p.q(),
            "l": p.ell(),
            "subsets_examined": if all { "all" } else { "singletons" },
            "dyck_free": findings.iter().all(|f| !f.dyck),
            "subsets": subsets,
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn enumerate_cmd(
    params: &ParamArgs,
    count_only: bool,
    parallel: usize,
    no_prefilter: bool,
    override_guard: bool,
    out: &OutputArg,
) -> CliResult {
    let p = required_params(params)?;
    if !count_only && out.output.is_none() {
        return Err(Failure::Usage(
            "listing rankings needs --output (or pass --count-only)".into(),
        ));
    }
    let options = EnumerateOptions {
        count_only,
        parallel,
        dyck_prefilter: !no_prefilter,
        override_guard,
    };
    let e = enumerate_feasible(&p, &options)?;
    let summary = json!({
        "q": p.q(),
        "l": p.ell(),
        "examined": e.examined,
        "feasible": e.feasible,
        "prefiltered": e.prefiltered,
    });
    if let (Some(rankings), Some(path)) = (&e.rankings, &out.output) {
        let mut lines = String::new();
        for r in rankings {
            let doc = RankingJson::new(&p, &ranking_from_vector(r)?, None);
            lines.push_str(&serde_json::to_string(&doc).expect("serializable"));
            lines.push('\n');
        }
        fs::write(path, lines).map_err(|err| Failure::Io(format!("{}: {err}", path.display())))?;
    }
    emit_json(&OutputArg { output: None }, &summary)
}

fn sizes_cmd(params: &ParamArgs, as_json: bool) -> CliResult {
    let p = required_params(params)?;
    let report = code_sizes(&p)?;
    let bounds = length_bounds(&p, TieBreakMode::FirstOccurrence);
    let stdout = OutputArg { output: None };
    if as_json {
        return emit_json(&stdout, &SizesJson::new(&report, &bounds));
    }
    let mut rows: Vec<(&str, &SizeEntry)> = vec![
        ("systematic", &report.systematic),
        ("systematic + self-loops", &report.selfloop),
        ("first node", &report.firstnode),
        ("prior construction", &report.prior_work),
    ];
    if let Some(e) = &report.allnodes_reference {
        rows.push(("all nodes (reference)", e));
    }
    if let Some(e) = &report.total_feasible_reference {
        rows.push(("total feasible (reference)", e));
    }
    let mut t = format!("q = {}, l = {}\n", p.q(), p.ell());
    for (name, e) in rows {
        t.push_str(&format!("{name:<28} {:>28}  (≈ {})\n", e.size.to_string(), e.rate));
    }
    t.push_str(&format!(
        "length bounds: {} ≤ wt(E) ≤ {}; path weights ≤ {}; systematic k ≤ {}\n",
        bounds.lower, bounds.upper, bounds.path_weight, bounds.max_systematic_k
    ));
    emit(&stdout, &t)
}

fn verify_cmd(
    params: &ParamArgs,
    fa: &FrameArgs,
    input: Option<&Path>,
    seed: u64,
    expect: Option<&Path>,
    out: &OutputArg,
) -> CliResult {
    let (p, doc) = match input {
        Some(path) => {
            let (p, d) = read_message(path, params)?;
            (p, Some(d))
        }
        None => (required_params(params)?, None),
    };
    let frame = resolve_frame(fa, &p, None)?;
    let mode = resolve_mode(fa, None)?;
    let msg = match &doc {
        Some(d) => message(d, frame.graph())?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            codec::random_accepted(&frame, mode, &mut rng, 1000)?.0
        }
    };
    let rt = codec::round_trip(&frame, mode, &msg)?;
    let expected = match expect {
        Some(path) => {
            let want = from_json_str::<ProfileJson>(&read(path)?)?.to_weights()?;
            Some(want == rt.profile)
        }
        None => None,
    };
    let mut report = json!({
        "mode": mode.name(),
        "round_trip": rt.ok(),
        "profile_round_trip": rt.profile_ok,
        "message_round_trip": rt.message_ok,
        "string_length": rt.string_length,
        "length_bound_ok": verify_length(&rt.profile, frame.mode()),
        "profile": serde_json::to_value(ProfileJson::new(&rt.profile)?.with_origin(&frame, mode.name()))
            .expect("serializable"),
    });
    if let Some(m) = expected {
        report["matches_expected"] = json!(m);
    }
    emit_json(out, &report)?;
    if !rt.ok() {
        return Err(Error::Invariant("round trip did not reproduce the input".into()).into());
    }
    if expected == Some(false) {
        return Err(Error::Precondition("encoder output differs from --expect".into()).into());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match &cli.command {
        Command::Encode { params, frame, input, out } => encode_cmd(params, frame, input, out),
        Command::Decode { frame, input, out } => decode_cmd(frame, input, out),
        Command::Realize { profile, fasta, out } => realize_cmd(profile, *fasta, out),
        Command::Profile { params, string, input, out } => {
            profile_cmd(params, string.as_deref(), input.as_deref(), out)
        }
        Command::Feasible { input, profile, out } => {
            feasible_cmd(input.as_deref(), profile.as_deref(), out)
        }
        Command::CheckDyck { input, all_subsets, out } => check_dyck_cmd(input, *all_subsets, out),
        Command::Enumerate {
            params,
            count_only,
            parallel,
            no_prefilter,
            override_guard,
            out,
        } => enumerate_cmd(params, *count_only, *parallel, *no_prefilter, *override_guard, out),
        Command::Sizes { params, json, table: _ } => sizes_cmd(params, *json),
        Command::Verify { params, frame, input, seed, expect, out } => {
            verify_cmd(params, frame, input.as_deref(), *seed, expect.as_deref(), out)
        }
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({ "error": kind, "message": message });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end(), 1),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => fail(e.kind(), &e.to_string(), if e.is_internal() { 2 } else { 1 }),
        Err(Failure::Io(m)) => fail("io", &m, 1),
        Err(Failure::Usage(m)) => fail("usage", &m, 1),
    }
}
