//! Batch command-line front end. Every command is deterministic given its
//! inputs and seed; exit code 0 reports success or a pass, 1 a refutation
//! (distinct terms, failed recognition, violated axioms), 2 a usage error.

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use clusterword::cluster::{self, ClusterCheck};
use clusterword::corpus::{self, CorpusEntry};
use clusterword::expansion;
use clusterword::green;
use clusterword::recognition::{self, WorthyVerdict};
use clusterword::semigroup::FiniteSemigroup;
use clusterword::subshift::{self, ParryBeta};
use clusterword::term::{equal_oracle, OmegaTerm, Verdict};

#[derive(Parser)]
#[command(
    name = "clusterword",
    version,
    about = "Finite aperiodic semigroups and cluster words"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CorpusOpts {
    /// Number of random corpus members beyond the fixtures.
    #[arg(long = "oracle-size", default_value_t = 8)]
    oracle_size: usize,
    /// Seed for the random members.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Size bound for the random members.
    #[arg(long = "max-size", default_value_t = 8)]
    max_size: usize,
}

impl CorpusOpts {
    fn build(&self) -> Vec<CorpusEntry> {
        corpus::corpus(self.seed, self.max_size, self.oracle_size)
    }
}

#[derive(Args, Clone)]
struct SgpInput {
    /// Cayley table file.
    #[arg(long)]
    semigroup: String,
    /// Letter map `a=2,b=1` (1-based) overriding the file's `gens` line.
    #[arg(long)]
    map: Option<String>,
}

impl SgpInput {
    fn load(&self) -> Result<FiniteSemigroup> {
        let text = std::fs::read_to_string(&self.semigroup)
            .with_context(|| format!("reading {}", self.semigroup))?;
        let mut sg = FiniteSemigroup::from_table(&text)?;
        if let Some(map) = &self.map {
            sg.set_letter_map(parse_map(map, sg.size())?)?;
        }
        Ok(sg)
    }
}

fn parse_map(text: &str, size: usize) -> Result<BTreeMap<char, usize>> {
    let mut out = BTreeMap::new();
    for part in text.split(',') {
        let (letter, idx) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("bad map entry {part:?}, expected letter=index"))?;
        let letter = letter.trim();
        if letter.len() != 1 || !letter.chars().next().unwrap().is_ascii_lowercase() {
            bail!("bad letter {letter:?}");
        }
        let idx: usize = idx.trim().parse().context("bad element index")?;
        if idx == 0 || idx > size {
            bail!("element index {idx} out of range 1..={size}");
        }
        out.insert(letter.chars().next().unwrap(), idx - 1);
    }
    Ok(out)
}

#[derive(Subcommand)]
enum Command {
    /// Semigroup inspection and expansion.
    Sgp {
        #[command(subcommand)]
        action: SgpAction,
    },
    /// Omega-term operations.
    Term {
        #[command(subcommand)]
        action: TermAction,
    },
    /// Cluster expressions of normalized terms.
    Order {
        #[command(subcommand)]
        action: OrderAction,
    },
    /// Recognition of a term's cluster expression.
    Recognize {
        term: String,
        #[command(flatten)]
        sgp: Option<RecognizeTarget>,
        /// Element of the semigroup expected to recognize (1-based).
        #[arg(long)]
        element: Option<usize>,
        #[command(flatten)]
        corpus: CorpusOpts,
    },
    /// Worthiness of a term's cluster expression against the corpus.
    Worthy {
        term: String,
        #[command(flatten)]
        corpus: CorpusOpts,
    },
    /// Beta-shift languages from a quasi-greedy expansion `pre(period)`.
    Beta {
        #[command(subcommand)]
        action: BetaAction,
    },
    /// Corpus generation.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Args, Clone)]
struct RecognizeTarget {
    /// Cayley table file.
    #[arg(long)]
    semigroup: Option<String>,
    /// Letter map `a=2,b=1` (1-based).
    #[arg(long)]
    map: Option<String>,
}

#[derive(Subcommand)]
enum SgpAction {
    /// Size, generators, idempotents, classification predicates.
    Info {
        #[command(flatten)]
        input: SgpInput,
    },
    /// Green relation classes of S^I.
    Green {
        #[command(flatten)]
        input: SgpInput,
    },
    /// Classification predicates with witnesses.
    Check {
        #[command(flatten)]
        input: SgpInput,
    },
    /// Chain expansions and the unambiguous cover.
    Expand {
        #[command(flatten)]
        input: SgpInput,
        /// Expansion rounds cap.
        #[arg(long, default_value_t = expansion::DEFAULT_COVER_ROUNDS)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum TermAction {
    /// Parse and reprint.
    Parse { term: String },
    /// Canonical form under the aperiodic rewriting rules.
    Normalize { term: String },
    /// Image in a finite semigroup.
    Eval {
        term: String,
        #[command(flatten)]
        input: SgpInput,
    },
    /// Compare two terms: canonical forms plus the corpus oracle.
    Equal {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        corpus: CorpusOpts,
    },
    /// Finite factors up to a length bound.
    Factors {
        term: String,
        /// Length bound.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum OrderAction {
    /// Block structure and sketch of the cluster expression.
    Build { term: String },
    /// Canonical order type.
    Type { term: String },
    /// First or last step labels.
    Window {
        term: String,
        #[arg(long, conflicts_with = "right")]
        left: Option<usize>,
        #[arg(long)]
        right: Option<usize>,
    },
    /// Stationary families and their J-class representatives.
    Stationary { term: String },
    /// Clustered-order axioms.
    Clustered { term: String },
}

#[derive(Subcommand)]
enum BetaAction {
    /// Admissible words per length.
    Language {
        expansion: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Factor complexity rows `n q(n)`.
    Complexity {
        expansion: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Rows `n q(n) estimate`.
    Entropy {
        expansion: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Deterministic corpus listing.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "max-size", default_value_t = 8)]
        max_size: usize,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

fn parsed(term: &str) -> Result<OmegaTerm> {
    Ok(OmegaTerm::parse(term)?)
}

fn normalized(term: &str) -> Result<OmegaTerm> {
    Ok(parsed(term)?.normalize())
}

fn profile_lines(sg: &FiniteSemigroup) -> Vec<String> {
    let p = green::profile(sg);
    vec![
        format!("aperiodic: {}", p.aperiodic),
        format!("unambiguous: {}", p.unambiguous),
        format!("equidivisible: {}", p.equidivisible),
        format!("stable: {}", p.stable),
    ]
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sgp { action } => sgp(action),
        Command::Term { action } => term(action),
        Command::Order { action } => order(action),
        Command::Recognize {
            term,
            sgp,
            element,
            corpus,
        } => recognize(&term, sgp, element, &corpus),
        Command::Worthy { term, corpus } => worthy(&term, &corpus),
        Command::Beta { action } => beta(action),
        Command::Corpus { action } => corpus_cmd(action),
    }
}

fn sgp(action: SgpAction) -> Result<i32> {
    match action {
        SgpAction::Info { input } => {
            let sg = input.load()?;
            println!("size: {}", sg.size());
            match sg.generators() {
                Some(gens) => {
                    let parts: Vec<String> =
                        gens.iter().map(|(l, i)| format!("{l}={}", i + 1)).collect();
                    println!("generators: {}", parts.join(" "));
                }
                None => println!("generators: none"),
            }
            let idem: Vec<String> = sg
                .elements()
                .filter(|&x| sg.mul(x, x) == x)
                .map(|x| (x + 1).to_string())
                .collect();
            println!("idempotents: {}", idem.join(" "));
            for line in profile_lines(&sg) {
                println!("{line}");
            }
            Ok(0)
        }
        SgpAction::Green { input } => {
            let sg = input.load()?;
            let gd = green::green(&sg);
            let show = |name: &str, class: &[usize]| {
                let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
                for x in sg.elements1() {
                    let label = if x == sg.one() {
                        "1".to_string()
                    } else {
                        (x + 1).to_string()
                    };
                    groups.entry(class[x]).or_default().push(label);
                }
                let rendered: Vec<String> = groups
                    .values()
                    .map(|g| format!("{{{}}}", g.join(",")))
                    .collect();
                println!("{name}: {}", rendered.join(" "));
            };
            show("R", &gd.r_class);
            show("L", &gd.l_class);
            show("J", &gd.j_class);
            show("H", &gd.h_class);
            show("D", &gd.d_class);
            Ok(0)
        }
        SgpAction::Check { input } => {
            let sg = input.load()?;
            for line in profile_lines(&sg) {
                println!("{line}");
            }
            if let Some((x, y, u, v)) = green::equidivisibility_witness(&sg) {
                println!(
                    "equidivisibility witness: x={} y={} u={} v={}",
                    x + 1,
                    y + 1,
                    u + 1,
                    v + 1
                );
            }
            Ok(0)
        }
        SgpAction::Expand { input, cap } => {
            let sg = input.load()?;
            for (name, side) in [
                ("left", expansion::Side::Left),
                ("right", expansion::Side::Right),
            ] {
                let (exp, _) = expansion::rhodes_expansion(&sg, side)?;
                println!("{name} expansion: size {}", exp.size());
            }
            match expansion::unambiguous_cover(&sg, cap) {
                Ok(cover) => {
                    println!(
                        "unambiguous cover: size {} after {} rounds",
                        cover.sg.size(),
                        cover.rounds
                    );
                    Ok(0)
                }
                Err(e @ clusterword::Error::CoverCapExceeded { .. }) => {
                    println!("unambiguous cover: {e}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn term(action: TermAction) -> Result<i32> {
    match action {
        TermAction::Parse { term } => {
            println!("{}", parsed(&term)?);
            Ok(0)
        }
        TermAction::Normalize { term } => {
            println!("{}", normalized(&term)?);
            Ok(0)
        }
        TermAction::Eval { term, input } => {
            let sg = input.load()?;
            let phi = sg
                .generators()
                .ok_or_else(|| anyhow!("no generator map; pass --map"))?
                .clone();
            let value = parsed(&term)?.eval(&sg, &phi)?;
            println!("{}", value + 1);
            Ok(0)
        }
        TermAction::Equal { lhs, rhs, corpus } => {
            let l = parsed(&lhs)?;
            let r = parsed(&rhs)?;
            let same_nf = l.normalize() == r.normalize();
            match equal_oracle(&l, &r, &corpus.build()) {
                Verdict::Distinct { witness, lhs, rhs } => {
                    println!("DISTINCT (witness {witness}: images {lhs} vs {rhs})");
                    Ok(1)
                }
                Verdict::IndistinguishableAtScale if same_nf => {
                    println!("EQUAL (normal forms identical; corpus agrees)");
                    Ok(0)
                }
                Verdict::IndistinguishableAtScale => {
                    println!(
                        "INDISTINGUISHABLE_AT_SCALE (finding: normal forms differ, corpus cannot separate)"
                    );
                    Ok(0)
                }
            }
        }
        TermAction::Factors { term, depth } => {
            let t = parsed(&term)?;
            let factors = t.factors_upto(depth);
            for n in 1..=depth {
                let row: Vec<&String> = factors.iter().filter(|w| w.len() == n).collect();
                let words: Vec<&str> = row.iter().map(|w| w.as_str()).collect();
                println!("{n} {} {}", words.len(), words.join(" "));
            }
            Ok(0)
        }
    }
}

fn order(action: OrderAction) -> Result<i32> {
    match action {
        OrderAction::Build { term } => {
            let t = normalized(&term)?;
            let ce = cluster::build(&t)?;
            println!("term: {t}");
            print_blocks(&ce, 0);
            println!("diagram: {}", cluster::diagram(&ce));
            Ok(0)
        }
        OrderAction::Type { term } => {
            let ce = cluster::build(&normalized(&term)?)?;
            println!("{}", cluster::order_type(&ce));
            Ok(0)
        }
        OrderAction::Window { term, left, right } => {
            let ce = cluster::build(&normalized(&term)?)?;
            match (left, right) {
                (Some(k), None) => println!("{}", cluster::window_left(&ce, k)),
                (None, Some(k)) => println!("{}", cluster::window_right(&ce, k)),
                _ => bail!("pass exactly one of --left K or --right K"),
            }
            Ok(0)
        }
        OrderAction::Stationary { term } => {
            let ce = cluster::build(&normalized(&term)?)?;
            let stats = cluster::stationary_points(&ce);
            if stats.is_empty() {
                println!("none");
            }
            for (family, jrep) in stats {
                println!("{family} jrep {jrep}");
            }
            Ok(0)
        }
        OrderAction::Clustered { term } => {
            let ce = cluster::build(&normalized(&term)?)?;
            match cluster::check_clustered(&ce) {
                ClusterCheck::Clustered => {
                    println!("CLUSTERED");
                    Ok(0)
                }
                ClusterCheck::Violation(ax) => {
                    println!("VIOLATION({ax:?})");
                    Ok(1)
                }
            }
        }
    }
}

fn print_blocks(ce: &cluster::ClusterExpr, indent: usize) {
    let pad = "  ".repeat(indent);
    for (i, block) in ce.blocks.iter().enumerate() {
        match block {
            cluster::Block::Letters(s) => println!("{pad}[{i}] letters {s}"),
            cluster::Block::Omega { body, base, jrep } => {
                println!("{pad}[{i}] omega base {base} jrep {jrep}");
                print_blocks(body, indent + 1);
            }
        }
    }
}

fn recognize(
    term: &str,
    target: Option<RecognizeTarget>,
    element: Option<usize>,
    corpus: &CorpusOpts,
) -> Result<i32> {
    let t = normalized(term)?;
    let ce = cluster::build(&t)?;
    match target {
        Some(RecognizeTarget {
            semigroup: Some(file),
            map,
        }) => {
            let input = SgpInput {
                semigroup: file,
                map,
            };
            let sg = input.load()?;
            let phi = sg
                .generators()
                .ok_or_else(|| anyhow!("no generator map; pass --map"))?
                .clone();
            let s = element.ok_or_else(|| anyhow!("pass --element INDEX"))?;
            if s == 0 || s > sg.size() {
                bail!("element index {s} out of range 1..={}", sg.size());
            }
            if recognition::verify_recognition(&ce, &sg, &phi, s - 1)? {
                println!("RECOGNIZED");
                Ok(0)
            } else {
                println!("NOT RECOGNIZED");
                Ok(1)
            }
        }
        _ => {
            // grid over the corpus
            let mut all_ok = true;
            for entry in corpus.build() {
                let sg = entry.recognition_target();
                let phi = sg
                    .generators()
                    .expect("corpus members carry generators")
                    .clone();
                if !t.letters().iter().all(|c| phi.contains_key(c)) {
                    continue;
                }
                let eval = t.eval(sg, &phi)?;
                let set = recognition::recognized_set(&ce, sg, &phi)?;
                let ok = set == vec![eval];
                all_ok &= ok;
                println!(
                    "{t} | {} | {} | {{{}}} | {}",
                    entry.id,
                    eval + 1,
                    set.iter()
                        .map(|v| (v + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    if ok { "OK" } else { "MISMATCH" },
                );
            }
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

fn worthy(term: &str, corpus: &CorpusOpts) -> Result<i32> {
    let t = normalized(term)?;
    let ce = cluster::build(&t)?;
    let report = recognition::check_worthy(&ce, &corpus.build());
    for line in &report.lines {
        println!("{line}");
    }
    match report.verdict {
        WorthyVerdict::PassAtScale => {
            println!("PASS-at-scale");
            Ok(0)
        }
        WorthyVerdict::Undecided(why) => {
            println!("UNDECIDED-at-scale: {why}");
            Ok(0)
        }
        WorthyVerdict::Refuted(why) => {
            println!("REFUTED: {why}");
            Ok(1)
        }
    }
}

fn beta(action: BetaAction) -> Result<i32> {
    match action {
        BetaAction::Language { expansion, depth } => {
            let pb = ParryBeta::parse(&expansion)?;
            let lang = subshift::beta_language(&pb, depth);
            for n in 1..=depth {
                let words: Vec<String> = lang.words[n - 1].iter().map(|w| lang.render(w)).collect();
                println!("{n} {} {}", words.len(), words.join(" "));
            }
            Ok(0)
        }
        BetaAction::Complexity { expansion, depth } => {
            let pb = ParryBeta::parse(&expansion)?;
            let lang = subshift::beta_language(&pb, depth);
            let counts = subshift::factor_complexity(&lang, depth);
            for (i, q) in counts.iter().enumerate() {
                println!("{} {}", i + 1, q);
            }
            Ok(0)
        }
        BetaAction::Entropy { expansion, depth } => {
            let pb = ParryBeta::parse(&expansion)?;
            let lang = subshift::beta_language(&pb, depth);
            let counts = subshift::factor_complexity(&lang, depth);
            for n in 1..=counts.len() {
                let est = subshift::entropy_estimate(&counts, n)?;
                println!("{} {} {:.5}", n, counts[n - 1], est);
            }
            Ok(0)
        }
    }
}

fn corpus_cmd(action: CorpusAction) -> Result<i32> {
    match action {
        CorpusAction::Generate {
            seed,
            max_size,
            count,
        } => {
            for entry in corpus::corpus(seed, max_size, count) {
                let p = green::profile(&entry.sg);
                println!(
                    "# {} size={} aperiodic={} unambiguous={} equidivisible={} cover_size={} cover_rounds={}",
                    entry.id,
                    entry.sg.size(),
                    p.aperiodic,
                    p.unambiguous,
                    p.equidivisible,
                    entry.cover.sg.size(),
                    entry.cover.rounds,
                );
                print!("{}", entry.sg.to_table_string());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
