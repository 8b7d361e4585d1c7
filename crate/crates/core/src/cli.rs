//! The `pathcat` command line: load or generate a model, run one suite, and
//! emit a report. Exit codes: 0 all passed, 1 failures, 2 usage or input
//! errors, 3 resource cap.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::appendixpb::{construct_fiberwise_path_object, fiberwise_path_object_is_valid, slice_comparison};
use crate::enrichment::{
    groupoid_laws, horizontal_associativity, horizontal_formulas_agree, interchange_law, whisker_exchange, whiskering_lemmas, Enrichment,
};
use crate::error::{Error, Result};
use crate::fincat::{Category, MorId, ObjId};
use crate::funcspaces::{
    build_funext_comparison, check_exponential_with, check_funext, check_pi_type, construct_exponential_over_fibration, exponential_square_commutes,
    funext_squares, ExponentialCandidate, PiCandidate, Verdict,
};
use crate::gpdcheck::groupoid_iso_search;
use crate::groupoid::{Compacted, FunctorGroupoid};
use crate::models::{load_model, GpdModel, TableModel};
use crate::pathstruct::{path_object, validate_path_axioms, PathCategory, DEFAULT_CAP};
use crate::report::{CheckResult, Report};

#[derive(Parser, Debug)]
#[command(name = "pathcat", version, about = "Checks and constructions on finite path categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the path-category axioms.
    Validate(Options),
    /// Build every hom-groupoid between objects of the model.
    Enrich(Options),
    /// Check the two-dimensional laws of the hom-groupoids.
    Laws(Options),
    /// Grade exponential candidates.
    CheckExp(Options),
    /// Grade Pi-type candidates.
    CheckPi(Options),
    /// Run the pullback constructions and verify their outputs.
    Construct(Options),
    /// Compare strength with function extensionality.
    Funext(Options),
    /// Every suite in one report.
    Report(Options),
}

impl Command {
    fn parts(&self) -> (&'static str, &Options) {
        match self {
            Command::Validate(o) => ("validate", o),
            Command::Enrich(o) => ("enrich", o),
            Command::Laws(o) => ("laws", o),
            Command::CheckExp(o) => ("check-exp", o),
            Command::CheckPi(o) => ("check-pi", o),
            Command::Construct(o) => ("construct", o),
            Command::Funext(o) => ("funext", o),
            Command::Report(o) => ("report", o),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// A model document (JSON).
    pub model: Option<PathBuf>,
    /// Finite sets of these sizes, e.g. `1,2`.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["model", "gpd_seeds"])]
    pub discrete: Option<Vec<u32>>,
    /// Builtin seed groupoids: terminal, interval, bz2, indiscrete3.
    #[arg(long, value_delimiter = ',', conflicts_with = "model")]
    pub gpd_seeds: Option<Vec<String>>,
    /// Restrict `laws` to these laws (repeatable); all by default.
    #[arg(long = "law", value_enum)]
    pub laws: Vec<Law>,
    /// A candidate document for check-exp, check-pi or funext.
    #[arg(long)]
    pub candidate: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Groupoid,
    Interchange,
    HorizontalAssociativity,
    HorizontalFormulas,
    WhiskerExchange,
    Whiskering,
}

impl Law {
    const ALL: [Law; 6] =
        [Law::Groupoid, Law::Interchange, Law::HorizontalAssociativity, Law::HorizontalFormulas, Law::WhiskerExchange, Law::Whiskering];
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// An exponential `{kind: "exponential", x, y, e, eval}` or a Pi-type
/// `{kind: "pi", f, g, pi, proj, eval}`, in raw ids of the model.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CandidateDoc {
    Exponential { x: u32, y: u32, e: u32, eval: u32 },
    Pi { f: u32, g: u32, pi: u32, proj: u32, eval: u32 },
}

pub fn load_candidate(path: &Path) -> Result<CandidateDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { location: format!("{}:{}:{}", path.display(), e.line(), e.column()), message: e.to_string() })
}

#[allow(clippy::large_enum_variant)]
pub enum Model {
    Gpd(GpdModel),
    Table(TableModel),
}

impl Model {
    pub fn from_options(o: &Options) -> Result<Model> {
        match (&o.model, &o.discrete, &o.gpd_seeds) {
            (Some(p), None, None) => Ok(Model::Table(load_model(p)?)),
            (None, Some(sizes), None) => Ok(Model::Gpd(GpdModel::discrete(sizes, o.cap))),
            (None, None, Some(names)) => {
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                Ok(Model::Gpd(GpdModel::from_seed_names(&names, o.cap)?))
            }
            (None, None, None) => Err(Error::pre("no model: give a document, --discrete or --gpd-seeds")),
            _ => Err(Error::pre("give exactly one model source")),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Model::Gpd(m) => m.name().to_string(),
            Model::Table(m) => m.name.clone(),
        }
    }
}

/// Runs `command` (one of the subcommand names) and assembles its report.
pub fn run_suite(command: &str, model: &Model, o: &Options) -> Result<Report> {
    let mut rep = Report::new(command, &model.name());
    let candidate = o.candidate.as_deref().map(load_candidate).transpose()?;
    let laws = if o.laws.is_empty() { Law::ALL.to_vec() } else { o.laws.clone() };
    let all = command == "report";
    // a full report uses the candidate wherever its kind fits
    let (exp_cd, pi_cd) = match &candidate {
        Some(cd @ CandidateDoc::Exponential { .. }) if all => (Some(cd), None),
        Some(cd @ CandidateDoc::Pi { .. }) if all => (None, Some(cd)),
        Some(cd) => (Some(cd), Some(cd)),
        None => (None, None),
    };
    if command == "validate" || all {
        match model {
            Model::Gpd(m) => validate(m, &mut rep)?,
            Model::Table(m) => validate(m, &mut rep)?,
        }
    }
    if command == "enrich" || all {
        match model {
            Model::Gpd(m) => {
                enrich(m, &mut rep)?;
                functor_groupoid_oracle(m, &mut rep)?;
            }
            Model::Table(m) => enrich(m, &mut rep)?,
        }
    }
    if command == "laws" || all {
        match model {
            Model::Gpd(m) => law_suite(m, &laws, &mut rep)?,
            Model::Table(m) => law_suite(m, &laws, &mut rep)?,
        }
    }
    if command == "check-exp" || all {
        match (model, exp_cd) {
            (Model::Gpd(m), Some(cd)) => exp_from_doc(m, cd, &mut rep)?,
            (Model::Table(m), Some(cd)) => exp_from_doc(m, cd, &mut rep)?,
            (Model::Gpd(m), None) => functor_exponentials(m, &mut rep)?,
            (Model::Table(_), None) => rep.notes.push("no exponential candidates: pass --candidate".into()),
        }
    }
    if command == "check-pi" || all {
        match (model, pi_cd) {
            (Model::Gpd(m), Some(cd)) => pi_from_doc(m, cd, &mut rep)?,
            (Model::Table(m), Some(cd)) => pi_from_doc(m, cd, &mut rep)?,
            (Model::Gpd(m), None) => model_pi_types(m, &mut rep)?,
            (Model::Table(m), None) => model_pi_types(m, &mut rep)?,
        }
    }
    if command == "construct" || all {
        match model {
            Model::Gpd(m) => {
                fiberwise_path_objects(m, &mut rep)?;
                slice_comparisons(m, &mut rep)?;
                exponentials_over_fibrations(m, &mut rep)?;
            }
            Model::Table(m) => {
                fiberwise_path_objects(m, &mut rep)?;
                slice_comparisons(m, &mut rep)?;
            }
        }
    }
    if command == "funext" || all {
        match (model, exp_cd) {
            (Model::Gpd(m), Some(cd)) => funext_from_doc(m, cd, &mut rep)?,
            (Model::Table(m), Some(cd)) => funext_from_doc(m, cd, &mut rep)?,
            (Model::Gpd(m), None) => {
                for (x, y) in pairs(&m.objects()) {
                    let cand = m.functor_exponential(x, y)?;
                    funext(m, &cand, &mut rep)?;
                }
            }
            (Model::Table(_), None) => rep.notes.push("no exponential candidates: pass --candidate".into()),
        }
    }
    Ok(rep)
}

fn pairs(objs: &[ObjId]) -> Vec<(ObjId, ObjId)> {
    objs.iter().flat_map(|&x| objs.iter().map(move |&y| (x, y))).collect()
}

fn fibrations<C: PathCategory + ?Sized>(c: &C) -> Result<Vec<MorId>> {
    let mut out = Vec::new();
    for (x, y) in pairs(&c.objects()) {
        out.extend(c.hom_set(x, y)?.into_iter().filter(|&f| c.is_fibration(f)));
    }
    Ok(out)
}

fn validate<C: PathCategory + ?Sized>(c: &C, rep: &mut Report) -> Result<()> {
    let v = validate_path_axioms(c)?;
    let mut res = CheckResult::new("path-category axioms");
    if v.is_empty() {
        res.pass();
    }
    for violation in v.violations {
        res.fail(violation);
    }
    rep.add(res);
    Ok(())
}

fn enrich<C: PathCategory + ?Sized>(c: &C, rep: &mut Report) -> Result<()> {
    let en = Enrichment::new(c);
    let mut res = CheckResult::new("hom-groupoids are groupoids");
    for (x, y) in pairs(&c.objects()) {
        let h = en.hom(x, y)?;
        let ok = h.identity.iter().enumerate().all(|(i, &a)| h.src[a] == i && h.tgt[a] == i);
        res.record(ok, "bad_identity", vec![x.0, y.0], || format!("C({x}, {y}) has misplaced identities"));
        rep.notes.push(format!("C({x}, {y}): {} objects, {} arrows", h.objects.len(), h.n_arrows()));
    }
    rep.add(res);
    Ok(())
}

fn functor_groupoid_oracle(m: &GpdModel, rep: &mut Report) -> Result<()> {
    let en = Enrichment::new(m);
    let mut res = CheckResult::new("hom-groupoids match functor groupoids");
    for (x, y) in pairs(&m.objects()) {
        let h = en.hom(x, y)?;
        let (gx, gy) = (m.gpd(x), m.gpd(y));
        let fun = Compacted::build(FunctorGroupoid::new(&gx, &gy, &mut m.budget())?, &mut m.budget())?;
        let iso = groupoid_iso_search(&h.gpd, &fun.gpd, &mut m.budget())?;
        res.record(iso.is_some(), "not_isomorphic", vec![x.0, y.0], || format!("C({x}, {y}) is not Fun({x}, {y})"));
    }
    rep.add(res);
    Ok(())
}

/// Hom-groupoids with more objects than this are left out of the law suite
/// (and the omission noted): the quadruple laws grow with the fourth power of
/// the arrow count.
pub const LAW_MAX_HOM_OBJECTS: usize = 8;

fn law_suite<C: PathCategory + ?Sized>(c: &C, laws: &[Law], rep: &mut Report) -> Result<()> {
    let en = Enrichment::new(c);
    let objs = c.objects();
    let mut skipped = std::collections::BTreeSet::new();
    let mut small = |homs: &[(ObjId, ObjId)]| -> Result<bool> {
        let mut ok = true;
        for &(x, y) in homs {
            if en.hom(x, y)?.objects.len() > LAW_MAX_HOM_OBJECTS {
                skipped.insert((x, y));
                ok = false;
            }
        }
        Ok(ok)
    };
    let mut checks = Vec::new();
    for &law in laws {
        let mut parts = Vec::new();
        match law {
            Law::Groupoid => {
                for (x, y) in pairs(&objs) {
                    if small(&[(x, y)])? {
                        parts.extend(groupoid_laws(&en, x, y)?);
                    }
                }
            }
            Law::Whiskering => parts.extend(whiskering_lemmas(&en, &objs)?),
            Law::Interchange | Law::HorizontalFormulas => {
                for &x in &objs {
                    for (y, z) in pairs(&objs) {
                        if !small(&[(x, y), (y, z), (x, z)])? {
                            continue;
                        }
                        parts.push(match law {
                            Law::Interchange => interchange_law(&en, x, y, z)?,
                            _ => horizontal_formulas_agree(&en, x, y, z)?,
                        });
                    }
                }
            }
            Law::HorizontalAssociativity | Law::WhiskerExchange => {
                for (x, y) in pairs(&objs) {
                    for (z, w) in pairs(&objs) {
                        if !small(&[(x, y), (y, z), (z, w), (x, z), (y, w), (x, w)])? {
                            continue;
                        }
                        parts.push(match law {
                            Law::HorizontalAssociativity => horizontal_associativity(&en, x, y, z, w)?,
                            _ => whisker_exchange(&en, x, y, z, w)?,
                        });
                    }
                }
            }
        }
        let name = match law {
            Law::Groupoid => "groupoid laws",
            Law::Interchange => "interchange law",
            Law::HorizontalAssociativity => "horizontal associativity",
            Law::HorizontalFormulas => "horizontal composition formulas agree",
            Law::WhiskerExchange => "whisker exchange",
            Law::Whiskering => "whiskering lemmas",
        };
        let mut merged = CheckResult::new(name);
        for p in parts {
            rep.notes.push(format!("{}: {} checked", p.name, p.checked));
            merged.checked += p.checked;
            merged.failures.extend(p.failures);
        }
        checks.push(merged);
    }
    for (x, y) in skipped {
        rep.notes.push(format!("C({x}, {y}) has more than {LAW_MAX_HOM_OBJECTS} objects; laws through it skipped"));
    }
    for c in checks {
        rep.add(c);
    }
    Ok(())
}

fn grade(rep: &mut Report, what: &str, v: &Verdict) {
    for (name, ok, witness) in [("weak", v.weak, v.weak_witness), ("ordinary", v.ordinary, v.ordinary_witness), ("strong", v.strong, v.strong_witness)]
    {
        let mut res = CheckResult::new(format!("{what} is {name}"));
        res.record(ok, &format!("not_{name}"), witness.into_iter().collect(), || format!("fails at test {}", witness.unwrap_or_default()));
        rep.add(res);
    }
}

fn exponential<C: PathCategory + ?Sized>(en: &Enrichment<C>, cand: &ExponentialCandidate, rep: &mut Report) -> Result<()> {
    let v = check_exponential_with(en, cand)?;
    grade(rep, &format!("exponential {} ({} -> {}, eval {})", cand.e, cand.x, cand.y, cand.eval), &v);
    Ok(())
}

fn exp_candidate<C: PathCategory + ?Sized>(c: &C, cd: &CandidateDoc) -> Result<ExponentialCandidate> {
    match *cd {
        CandidateDoc::Exponential { x, y, e, eval } => ExponentialCandidate::new(c, ObjId(x), ObjId(y), ObjId(e), MorId(eval)),
        CandidateDoc::Pi { .. } => Err(Error::pre("expected an exponential candidate {x, y, e, eval}")),
    }
}

fn exp_from_doc<C: PathCategory + ?Sized>(c: &C, cd: &CandidateDoc, rep: &mut Report) -> Result<()> {
    let cand = exp_candidate(c, cd)?;
    exponential(&Enrichment::new(c), &cand, rep)
}

fn functor_exponentials(m: &GpdModel, rep: &mut Report) -> Result<()> {
    let en = Enrichment::new(m);
    for (x, y) in pairs(&m.objects()) {
        let cand = m.functor_exponential(x, y)?;
        exponential(&en, &cand, rep)?;
    }
    Ok(())
}

fn pi<C: PathCategory + ?Sized>(c: &C, cand: &PiCandidate, rep: &mut Report) -> Result<()> {
    let v = check_pi_type(c, cand)?;
    grade(rep, &format!("Pi-type {} of {} along {}", cand.pi, cand.f, cand.g), &v);
    Ok(())
}

fn pi_from_doc<C: PathCategory + ?Sized>(c: &C, cd: &CandidateDoc, rep: &mut Report) -> Result<()> {
    match *cd {
        CandidateDoc::Pi { f, g, pi: p, proj, eval } => {
            let (f, g, proj) = (MorId(f), MorId(g), MorId(proj));
            if c.dom(proj) != ObjId(p) {
                return Err(Error::pre(format!("{proj} does not start at {}", ObjId(p))));
            }
            let pullback = c.pullback(proj, g)?;
            pi(c, &PiCandidate { f, g, pi: ObjId(p), proj, eval: MorId(eval), pullback }, rep)
        }
        CandidateDoc::Exponential { .. } => Err(Error::pre("expected a Pi-type candidate {f, g, pi, proj, eval}")),
    }
}

/// The model's own Pi-types of every fibration along maps to the terminal
/// object.
fn model_pi_types<C: PathCategory + ?Sized>(c: &C, rep: &mut Report) -> Result<()> {
    for f in fibrations(c)? {
        let g = c.terminal_map(c.cod(f))?;
        match c.pi_type(f, g) {
            Ok(cand) => pi(c, &cand, rep)?,
            Err(Error::MissingPiType(why)) => rep.notes.push(format!("no Pi-type of {f} along {g}: {why}")),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn fiberwise_path_objects<C: PathCategory + ?Sized>(c: &C, rep: &mut Report) -> Result<()> {
    let mut res = CheckResult::new("fiberwise path objects are path objects");
    for f in fibrations(c)? {
        match construct_fiberwise_path_object(c, f) {
            Ok(q) => {
                let ok = fiberwise_path_object_is_valid(c, &q)?;
                res.record(ok, "not_path_object", vec![f.0, q.data.object.0], || format!("Q = {} over {f}", q.data.object));
            }
            Err(Error::NoSuitablePf(_)) => res.record(false, "no_suitable_pf", vec![f.0], || format!("no normalized Pf for {f}")),
            Err(e) => return Err(e),
        }
    }
    rep.add(res);
    Ok(())
}

/// `J` for fibrations `f : X -> Y` with `g = Y -> 1` and `g = id`, and every
/// `h : W -> Y` from the model's objects.
fn slice_comparisons<C: PathCategory + ?Sized>(c: &C, rep: &mut Report) -> Result<()> {
    let mut res = CheckResult::new("slice comparison is e.s.f. and bijective on objects");
    for f in fibrations(c)? {
        let y = c.cod(f);
        for g in [c.identity(y), c.terminal_map(y)?] {
            if !c.is_fibration(g) {
                continue;
            }
            for w in c.objects() {
                for h in c.hom_set(w, y)? {
                    let j = slice_comparison(c, g, f, h)?;
                    res.record(j.esf(), "not_esf", vec![g.0, f.0, h.0], || {
                        format!("lands {} bijective {} full {}", j.lands_in_fiber, j.bijective_on_objects, j.full)
                    });
                }
            }
        }
    }
    rep.add(res);
    Ok(())
}

fn exponentials_over_fibrations(m: &GpdModel, rep: &mut Report) -> Result<()> {
    let en = Enrichment::new(m);
    let mut squares = CheckResult::new("exponentials over fibrations: square commutes");
    let mut strength = CheckResult::new("exponentials over fibrations keep the strength of the base");
    for p in fibrations(m)? {
        for x in m.objects() {
            let base = m.functor_exponential(x, m.cod(p))?;
            let (out, px) = construct_exponential_over_fibration(m, p, &base)?;
            let w = vec![p.0, x.0];
            squares.record(exponential_square_commutes(m, p, &base, &out, px)?, "square", w.clone(), || format!("{p}^{x}"));
            let (vb, vo) = (check_exponential_with(&en, &base)?, check_exponential_with(&en, &out)?);
            strength.record(!vb.strong || vo.strong, "weaker", w, || format!("{p}^{x} is not strong"));
        }
    }
    rep.add(squares);
    rep.add(strength);
    Ok(())
}

fn funext<C: PathCategory + ?Sized>(c: &C, cand: &ExponentialCandidate, rep: &mut Report) -> Result<()> {
    let fd = match build_funext_comparison(c, cand) {
        Ok(fd) => fd,
        Err(Error::NoFiller(why)) => {
            rep.notes.push(format!("no comparison for {}: {why}", cand.e));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let mut sq = funext_squares(c, &fd)?;
    sq.name = format!("{} for ({}, {})", sq.name, cand.x, cand.y);
    rep.add(sq);
    let v = check_funext(c, cand, &fd)?;
    let mut res = CheckResult::new(format!("strong iff phi is a weak equivalence for ({}, {})", cand.x, cand.y));
    res.record(v.agree, "disagree", vec![cand.e.0, fd.phi.0], || format!("strong {} but phi w.e. {}", v.strong, v.phi_weak_equivalence));
    rep.add(res);
    Ok(())
}

fn funext_from_doc<C: PathCategory + ?Sized>(c: &C, cd: &CandidateDoc, rep: &mut Report) -> Result<()> {
    let cand = exp_candidate(c, cd)?;
    path_object(c, cand.y)?;
    funext(c, &cand, rep)
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::ResourceCap { .. } => 3,
        _ => 2,
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code. Reports go to stdout or `--out`, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (name, o) = cli.command.parts();
    let rep = match Model::from_options(o).and_then(|m| run_suite(name, &m, o)) {
        Ok(rep) => rep,
        Err(e) => {
            eprintln!("pathcat {name}: {e}");
            return exit_code_for(&e);
        }
    };
    let text = match o.format {
        Format::Json => rep.to_json() + "\n",
        Format::Text => rep.to_text(),
    };
    match &o.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("pathcat {name}: {}: {e}", p.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    if rep.failure_count() == 0 {
        0
    } else {
        1
    }
}
