use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mpfam::constructions::{f_hm_t_s, f_t_ell, frankl_product, hilton_milner_family, triangle_family};
use mpfam::formulas::{frankl_bound, m_hm_t_s, m_max, m_t_ell};
use mpfam::search::{max_family_with, Engine, SearchReport, SearchStatus};
use mpfam::shifting::{check_projection_lemma, is_shifted, shift_family, shifted_closure, stabilize_nontrivial};
use mpfam::{Constructed, Element, Family, FamilyClass, LVector, Mode, PartStructure, ShiftIndex, TSPair};
use mpfam_cli::{layer_cap, reproduce, search_config, selftest, ReproductionReport, Suite};
use serde_json::json;

/// Multi-part intersecting families: formulas, constructions, shifting and
/// exact search.
#[derive(Parser)]
#[command(name = "mpfam", version)]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Instance {
    /// Part sizes, e.g. `5,5`.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<i64>,
    /// Uniformities, e.g. `2,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<i64>,
}

impl Instance {
    fn structure(&self) -> mpfam::Result<PartStructure> {
        PartStructure::new(&self.n, &self.k)
    }
}

#[derive(Args)]
struct Selector {
    /// Distinguished part (1-based).
    #[arg(long)]
    t: Option<usize>,
    /// Set of parts, e.g. `2,3`; a bare `--S` is the empty set.
    #[arg(long = "S", value_delimiter = ',', num_args = 0..=1)]
    s: Option<Vec<usize>>,
    /// Sequence in L_t, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    ell: Option<Vec<u32>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// The (t, S) family; needs --t and --S.
    Hm,
    /// The family F_{t,l}; needs --t and --ell.
    Ell,
    /// Single-part Hilton–Milner family.
    HiltonMilner,
    /// The star at element 1 of part t.
    Star,
    /// Sets holding two of three witnesses; needs --witnesses.
    Triangle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Counterexample,
    K1Table,
    HmTable,
    Identities,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Forcing,
    IncumbentFilter,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate size formulas: M_max by default, or one (t, S) pair or l.
    Formula {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        sel: Selector,
    },
    /// Build a family and write it as JSON.
    Construct {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        sel: Selector,
        #[arg(long, value_enum, default_value = "hm")]
        kind: Kind,
        /// Triangle witnesses as `part:value` triples, e.g. `1:1,2:1,3:1`.
        #[arg(long)]
        witnesses: Option<String>,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Read a family file and report its class, size and shiftedness.
    Verify { path: PathBuf },
    /// Apply one shift S_t^{i,j} to a family file.
    Shift {
        path: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Shift a family file until it is shifted in every part.
    Closure {
        path: PathBuf,
        /// Only apply shifts that keep a non-trivial family non-trivial.
        #[arg(long)]
        nontrivial: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Exact largest intersecting or non-trivially intersecting family.
    Search {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value = "nontrivial")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "forcing")]
        engine: EngineArg,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the optimal family here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Run a reproduction bundle.
    Reproduce {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Part counts for the k = 1 table.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<usize>>,
        /// Largest n for the k = 1 table.
        #[arg(long, default_value_t = 4)]
        n_max: i64,
    },
    /// Every bundle, including the property sweeps and engine cross-checks.
    Selftest,
}

/// Invalid input; exits 2.
#[derive(Debug)]
struct Invalid(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.into())
    }
}

type CmdResult = Result<bool, Invalid>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let json = cli.json;
    match cli.command {
        Command::Formula { inst, sel } => formula(&inst.structure()?, &sel, json),
        Command::Construct { inst, sel, kind, witnesses, out } => {
            construct(&inst.structure()?, &sel, kind, witnesses.as_deref(), out.as_deref())
        }
        Command::Verify { path } => verify(&read_family(&path)?, json),
        Command::Shift { path, t, i, j, out } => {
            let fam = read_family(&path)?;
            let idx = ShiftIndex::new(fam.structure(), t, i, j)?;
            let shifted = shift_family(fam.structure(), idx, &fam)?;
            write_family(&shifted, out.as_deref())?;
            Ok(true)
        }
        Command::Closure { path, nontrivial, out } => {
            let fam = read_family(&path)?;
            let ps = fam.structure().clone();
            let result = if nontrivial {
                let r = stabilize_nontrivial(&ps, &fam)?;
                let q: Vec<String> = r.q.iter().map(usize::to_string).collect();
                eprintln!("shifted in parts {{{}}} after {} shifts", q.join(","), r.steps);
                for w in &r.witnesses {
                    eprintln!("part {}: {w} trivializes", w.t);
                }
                r.family
            } else {
                shifted_closure(&ps, &fam)?
            };
            write_family(&result, out.as_deref())?;
            Ok(true)
        }
        Command::Search { inst, mode, engine, threads, witness } => {
            let ps = inst.structure()?;
            let mut cfg = search_config(threads).map_err(|e| anyhow!(e))?;
            cfg.engine = match engine {
                EngineArg::Forcing => Engine::Forcing,
                EngineArg::IncumbentFilter => Engine::IncumbentFilter,
            };
            let r = max_family_with(&ps, mode, &cfg)?;
            let report = SearchReport::new(&ps, mode, &r);
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("{ps} {mode}: size {} ({})", r.size, r.status);
                if let Some(m) = report.matches_m_max {
                    println!("matches M_max: {m}");
                }
                if let Some(f) = report.matches_frankl {
                    println!("matches star bound: {f}");
                }
                println!("nodes {} in {} ms", report.nodes, report.ms);
            }
            if let Some(path) = witness {
                if r.status == SearchStatus::Optimal {
                    write_family(&r.witness, Some(&path))?;
                }
            }
            Ok(true)
        }
        Command::Reproduce { suite, p, n_max } => {
            let cfg = search_config(1).map_err(|e| anyhow!(e))?;
            let suite = match suite {
                SuiteArg::Counterexample => Suite::Counterexample,
                SuiteArg::K1Table => Suite::K1Table,
                SuiteArg::HmTable => Suite::HmTable,
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::All => Suite::All,
            };
            let ps = p.unwrap_or_else(|| vec![3, 4]);
            if ps.iter().any(|&p| p < 3) || n_max < 2 {
                return Err(anyhow!("the k = 1 table needs p >= 3 and n-max >= 2").into());
            }
            Ok(emit(&reproduce(suite, (&ps, n_max), &cfg), json))
        }
        Command::Selftest => {
            let cfg = search_config(1).map_err(|e| anyhow!(e))?;
            Ok(emit(&selftest(&cfg), json))
        }
    }
}

fn emit(report: &ReproductionReport, json: bool) -> bool {
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    report.passed()
}

fn ts_pair(ps: &PartStructure, sel: &Selector) -> Result<TSPair, Invalid> {
    let t = sel.t.ok_or_else(|| anyhow!("--t is required"))?;
    let s = sel.s.clone().ok_or_else(|| anyhow!("--S is required"))?;
    Ok(TSPair::new(ps, t, &s)?)
}

fn l_vector(ps: &PartStructure, sel: &Selector) -> Result<LVector, Invalid> {
    let t = sel.t.ok_or_else(|| anyhow!("--t is required"))?;
    let ell = sel.ell.clone().ok_or_else(|| anyhow!("--ell is required"))?;
    Ok(LVector::new(ps, t, ell)?)
}

fn formula(ps: &PartStructure, sel: &Selector, json: bool) -> CmdResult {
    let out = if sel.ell.is_some() {
        let ell = l_vector(ps, sel)?;
        let v = m_t_ell(ps, &ell)?;
        json!({"instance": ps.to_doc(), "t": ell.t(), "ell": ell.values(), "m_t_ell": v.to_string()})
    } else if sel.s.is_some() || sel.t.is_some() {
        let ts = ts_pair(ps, sel)?;
        let v = m_hm_t_s(ps, &ts)?;
        json!({
            "instance": ps.to_doc(),
            "t": ts.t(),
            "S": ts.s(),
            "excluded": ts.is_excluded(ps),
            "m_hm_t_s": v.to_string(),
        })
    } else {
        let m = m_max(ps)?;
        let argmax: Vec<String> = m.argmax.iter().map(ToString::to_string).collect();
        json!({
            "instance": ps.to_doc(),
            "m_max": m.value.to_string(),
            "argmax": argmax,
            "frankl_bound": frankl_bound(ps).to_string(),
        })
    };
    if json {
        println!("{out}");
    } else {
        println!("{ps}");
        for (key, v) in out.as_object().expect("object").iter().filter(|(k, _)| *k != "instance") {
            match v {
                serde_json::Value::String(s) => println!("{key} = {s}"),
                other => println!("{key} = {other}"),
            }
        }
    }
    Ok(true)
}

fn parse_witnesses(text: &str) -> Result<[Element; 3], Invalid> {
    let parsed: Vec<Element> = text
        .split(',')
        .map(|w| {
            let (s, v) = w.split_once(':').ok_or_else(|| anyhow!("witness {w:?} is not part:value"))?;
            Ok(Element::new(s.trim().parse()?, v.trim().parse()?))
        })
        .collect::<anyhow::Result<_>>()?;
    parsed.try_into().map_err(|_| anyhow!("need exactly three witnesses").into())
}

fn construct(ps: &PartStructure, sel: &Selector, kind: Kind, witnesses: Option<&str>, out: Option<&Path>) -> CmdResult {
    let built: Constructed = match kind {
        Kind::Hm => f_hm_t_s(ps, &ts_pair(ps, sel)?, false)?,
        Kind::Ell => f_t_ell(ps, &l_vector(ps, sel)?)?,
        Kind::HiltonMilner => {
            if ps.parts() != 1 {
                return Err(anyhow!("the Hilton–Milner family needs a single part").into());
            }
            hilton_milner_family(ps.ns()[0].into(), ps.ks()[0].into())?
        }
        Kind::Star => frankl_product(ps, sel.t.unwrap_or(1))?,
        Kind::Triangle => {
            let [x, y, z] = parse_witnesses(witnesses.ok_or_else(|| anyhow!("--witnesses is required"))?)?;
            triangle_family(ps, x, y, z)?
        }
    };
    let fam = match built {
        Constructed::Materialized(f) => f,
        Constructed::Lazy(l) => l.materialize(layer_cap().map_err(|e| anyhow!(e))?)?,
    };
    write_family(&fam, out)?;
    Ok(true)
}

fn read_family(path: &Path) -> Result<Family, Invalid> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Family::from_json(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn write_family(fam: &Family, out: Option<&Path>) -> Result<(), Invalid> {
    let text = fam.to_json();
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn verify(fam: &Family, json: bool) -> CmdResult {
    let ps = fam.structure();
    let class = fam.classify();
    let shifted = is_shifted(ps, fam, None);
    let projection = if fam.is_intersecting() && shifted { Some(check_projection_lemma(ps, fam)) } else { None };
    if json {
        let out = json!({
            "instance": ps.to_doc(),
            "size": fam.len(),
            "class": class,
            "shifted": shifted,
            "projections_intersect": projection,
        });
        println!("{out}");
    } else {
        println!("{ps}");
        println!("size {}, {class}, shifted={shifted}", fam.len());
        if let Some(p) = projection {
            println!("projections intersect: {p}");
        }
        if class == FamilyClass::NotIntersecting {
            if let Some((a, b)) = fam.first_disjoint_pair() {
                println!("disjoint members: {} and {}", fam.members()[a], fam.members()[b]);
            }
        }
    }
    Ok(true)
}
