use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use qpa_core::builders::{self, Bicrossed, DrinfeldDouble};
use qpa_core::hopf::{HopfData, HopfReport};
use qpa_core::io::{self, Factorization, IoError};
use qpa_core::magic::{self, MagicCert};
use qpa_core::matchedpair::{MatchedPair, Side};
use qpa_core::permgrp::{Perm, PermGroup};
use qpa_core::qpacert::{self, Envelope, Presentation, QpaError, Status, Verdict};
use qpa_core::twist::{self, TwistError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Qpa(#[from] QpaError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Build(#[from] builders::BuildError),
    #[error(transparent)]
    Magic(#[from] magic::MagicError),
    #[error("cannot write {path}: {reason}")]
    Write { path: String, reason: String },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Function,
    Group,
    Double,
    DualDouble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefuteMethod {
    Auto,
    Prime,
    C4S3,
}

/// Where the algebra comes from.
#[derive(Debug, Clone)]
pub enum Input {
    Factorization(PathBuf),
    Group(PathBuf, AlgebraKind),
    Hopf(PathBuf),
}

#[derive(Debug, Clone)]
pub enum Command {
    Build { input: Input, save: Option<PathBuf> },
    Verify { input: Input, certificate: Option<PathBuf> },
    Certify { input: Input },
    Refute { factorization: PathBuf, method: RefuteMethod },
    Envelope { factorization: PathBuf },
    Twist { bicharacter: PathBuf, save: Option<PathBuf> },
    Report { factorization: PathBuf },
}

#[derive(Debug, Clone)]
pub struct Options {
    pub output: Format,
    pub order_cap: usize,
    pub conductor: Option<u32>,
    pub trust: bool,
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub options: Options,
}

/// What a job prints, and its exit code.
#[derive(Debug, Clone)]
pub struct Report {
    pub exit: i32,
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Text => self.text.clone(),
        }
    }
}

fn status_exit(s: Status) -> i32 {
    match s {
        Status::QpaCertified | Status::NotQpaRefuted => 0,
        Status::Undecided => 2,
    }
}

enum Loaded {
    Bicrossed(Factorization, Bicrossed),
    Function(PermGroup, HopfData),
    Group(PermGroup, HopfData),
    Double(DrinfeldDouble),
    DualDouble(DrinfeldDouble),
    Hopf(HopfData),
}

impl Loaded {
    fn hopf(&self) -> &HopfData {
        match self {
            Loaded::Bicrossed(_, b) => &b.hopf,
            Loaded::Function(_, h) | Loaded::Group(_, h) | Loaded::Hopf(h) => h,
            Loaded::Double(d) => &d.double,
            Loaded::DualDouble(d) => &d.dual,
        }
    }

    fn hopf_mut(&mut self) -> &mut HopfData {
        match self {
            Loaded::Bicrossed(_, b) => &mut b.hopf,
            Loaded::Function(_, h) | Loaded::Group(_, h) | Loaded::Hopf(h) => h,
            Loaded::Double(d) => &mut d.double,
            Loaded::DualDouble(d) => &mut d.dual,
        }
    }

    fn presentation(&self) -> Option<Presentation> {
        Some(match self {
            Loaded::Bicrossed(_, b) => Presentation::Bicrossed(b.clone()),
            Loaded::Function(g, _) => Presentation::FunctionAlgebra(g.clone()),
            Loaded::Group(g, _) => Presentation::GroupAlgebra(g.clone()),
            Loaded::Double(d) => Presentation::Double(d.clone()),
            Loaded::DualDouble(d) => Presentation::DualDouble(d.clone()),
            Loaded::Hopf(_) => return None,
        })
    }
}

fn load(input: &Input, opts: &Options) -> Result<Loaded, CliError> {
    let mut l = match input {
        Input::Factorization(p) => {
            let f = io::load_factorization(p, opts.order_cap)?;
            let b = f.build()?;
            Loaded::Bicrossed(f, b)
        }
        Input::Group(p, kind) => {
            let g = io::load_group(p, opts.order_cap)?;
            match kind {
                AlgebraKind::Function => {
                    let h = builders::function_algebra(&g);
                    Loaded::Function(g, h)
                }
                AlgebraKind::Group => {
                    let h = builders::group_algebra(&g);
                    Loaded::Group(g, h)
                }
                AlgebraKind::Double => Loaded::Double(builders::drinfeld_double(&g)?),
                AlgebraKind::DualDouble => Loaded::DualDouble(builders::drinfeld_double(&g)?),
            }
        }
        Input::Hopf(p) => Loaded::Hopf(io::load_hopf(p, opts.trust)?),
    };
    if let Some(n) = opts.conductor {
        l.hopf_mut().exponent = n;
    }
    Ok(l)
}

fn load_bicrossed(path: &Path, opts: &Options) -> Result<(Factorization, Bicrossed), CliError> {
    match load(&Input::Factorization(path.to_path_buf()), opts)? {
        Loaded::Bicrossed(f, b) => Ok((f, b)),
        _ => unreachable!(),
    }
}

fn save_json(path: &Path, v: &Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    std::fs::write(path, s).map_err(|e| CliError::Write { path: path.display().to_string(), reason: e.to_string() })
}

fn name(p: &Perm) -> String {
    if p.is_identity() {
        "()".into()
    } else {
        p.to_string()
    }
}

fn gens(g: &PermGroup) -> Vec<String> {
    g.greedy_generators().iter().map(name).collect()
}

fn flags_text(r: &HopfReport) -> String {
    let mut s = String::new();
    for (k, v) in [
        ("associative", r.associative),
        ("coassociative", r.coassociative),
        ("bialgebra", r.bialgebra),
        ("antipode (left)", r.antipode_left),
        ("antipode (right)", r.antipode_right),
        ("S^2 = id", r.s_squared_identity),
        ("commutative", r.commutative),
        ("cocommutative", r.cocommutative),
    ] {
        s += &format!("  {k}: {v}\n");
    }
    if let Some(f) = &r.first_failure {
        s += &format!("  first failure: {f}\n");
    }
    s
}

fn envelope_json(e: &Envelope) -> Value {
    json!({
        "dim": e.dim,
        "description": e.description,
        "cocommutative": e.cocommutative,
        "grouplikes": e.grouplikes,
    })
}

pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let opts = &job.options;
    match &job.command {
        Command::Build { input, save } => build(input, save.as_deref(), opts),
        Command::Verify { input, certificate } => verify(input, certificate.as_deref(), opts),
        Command::Certify { input } => certify(input, opts),
        Command::Refute { factorization, method } => refute(factorization, *method, opts),
        Command::Envelope { factorization } => envelope(factorization, opts),
        Command::Twist { bicharacter, save } => twist_job(bicharacter, save.as_deref(), opts),
        Command::Report { factorization } => report(factorization, opts),
    }
}

fn build(input: &Input, save: Option<&Path>, opts: &Options) -> Result<Report, CliError> {
    let l = load(input, opts)?;
    let h = l.hopf();
    let doc = io::hopf_to_json(h);
    if let Some(p) = save {
        save_json(p, &doc)?;
    }
    let r = h.verify();
    let mut text = format!("dim: {}\nnote: {}\nbasis: {}\n", h.dim, h.note, h.labels.join(" "));
    text += &format!("commutative: {}\ncocommutative: {}\n", r.commutative, r.cocommutative);
    if let Loaded::Bicrossed(_, b) = &l {
        let es = b.exact_sequence();
        let (a, d, q) = es.dims;
        text += &format!("exact sequence k^Gamma -> H -> kF: {} ({a} * {q} = {d})\n", es.all());
    }
    Ok(Report { exit: if r.is_hopf() { 0 } else { 1 }, json: doc, text })
}

fn certificate_from(h: &HopfData, v: &Value) -> Result<MagicCert, magic::MagicError> {
    // a verdict carries its certificate under "certificate"
    let c = v.get("certificate").unwrap_or(v);
    MagicCert::from_json(h, c)
}

fn verify(input: &Input, certificate: Option<&Path>, opts: &Options) -> Result<Report, CliError> {
    let l = load(input, opts)?;
    let h = l.hopf();
    let r = h.verify();
    let mut ok = r.is_hopf();
    let mut out = json!({ "dim": h.dim, "hopf": r });
    let mut text = format!("dim: {}\nHopf axioms: {}\n{}", h.dim, r.is_hopf(), flags_text(&r));
    if let Loaded::Bicrossed(_, b) = &l {
        let es = b.exact_sequence();
        ok &= es.all();
        text += &format!("exact sequence: {} (dims {:?})\n", es.all(), es.dims);
        out["exact_sequence"] = serde_json::to_value(&es).expect("serializable");
    }
    if let Some(p) = certificate {
        let v = io::load_json(p)?;
        match certificate_from(h, &v) {
            Ok(c) => {
                ok &= c.is_full_certificate;
                text += &format!(
                    "certificate: magic, degree {}, generated dimension {}, full {}\n",
                    c.size, c.generated_dim, c.is_full_certificate
                );
                out["certificate"] = json!({
                    "magic": true,
                    "size": c.size,
                    "generated_dim": c.generated_dim,
                    "is_full_certificate": c.is_full_certificate,
                    "degree": c.degree_line(),
                });
            }
            Err(e) => {
                ok = false;
                text += &format!("certificate: rejected: {e}\n");
                out["certificate"] = json!({ "magic": false, "error": e.to_string() });
            }
        }
    }
    out["verified"] = json!(ok);
    text += &format!("verified: {ok}\n");
    Ok(Report { exit: if ok { 0 } else { 1 }, json: out, text })
}

fn verdict_report(v: &Verdict) -> Report {
    Report { exit: status_exit(v.status), json: v.to_json(), text: v.to_text() }
}

fn certify(input: &Input, opts: &Options) -> Result<Report, CliError> {
    let l = load(input, opts)?;
    let Some(p) = l.presentation() else {
        let h = l.hopf();
        let json = json!({ "status": Status::Undecided, "dim": h.dim, "method": "no structural presentation" });
        let text = format!("status: {}\ndim: {}\nmethod: no structural presentation\n", Status::Undecided, h.dim);
        return Ok(Report { exit: 2, json, text });
    };
    Ok(verdict_report(&qpacert::full_pipeline(&p)?))
}

fn refute(path: &Path, method: RefuteMethod, opts: &Options) -> Result<Report, CliError> {
    let (_, b) = load_bicrossed(path, opts)?;
    let v = match method {
        RefuteMethod::Prime => qpacert::refute_prime(&b)?,
        RefuteMethod::C4S3 => qpacert::refute_c4_s3(&b)?,
        RefuteMethod::Auto => match qpacert::refute_prime(&b) {
            Ok(v) if v.status == Status::NotQpaRefuted => v,
            prime => match qpacert::refute_c4_s3(&b) {
                Ok(v) => v,
                Err(QpaError::StructureMismatch(_)) => prime?,
                Err(e) => return Err(e.into()),
            },
        },
    };
    Ok(verdict_report(&v))
}

fn envelope(path: &Path, opts: &Options) -> Result<Report, CliError> {
    let (_, b) = load_bicrossed(path, opts)?;
    let dim = b.hopf.dim;
    Ok(match qpacert::envelope(&b)? {
        Some(e) => Report {
            exit: 0,
            json: json!({ "dim": dim, "envelope": envelope_json(&e) }),
            text: format!(
                "dim: {dim}\nenvelope: dim {}, cocommutative {}, {}\n",
                e.dim, e.cocommutative, e.description
            ),
        },
        None => Report {
            exit: 2,
            json: json!({ "dim": dim, "envelope": Value::Null }),
            text: format!("dim: {dim}\nenvelope: undetermined\n"),
        },
    })
}

fn twist_job(path: &Path, save: Option<&Path>, opts: &Options) -> Result<Report, CliError> {
    let bc = io::load_bicharacter(path, opts.order_cap)?;
    let tga = builders::twisted_group_algebra(&bc.sigma)?;
    let center = tga.center().len();
    let mut out = json!({
        "description": bc.description,
        "bicharacter": {
            "group_order": bc.sigma.group.order(),
            "generators": bc.gens.iter().map(name).collect::<Vec<_>>(),
        },
        "twisted_group_algebra": {
            "dim": tga.dim(),
            "commutative": tga.is_commutative(),
            "center_dim": center,
        },
    });
    let mut text = format!(
        "bicharacter on a group of order {} generated by {}\ntwisted group algebra: dim {}, commutative {}, center dim {}\n",
        bc.sigma.group.order(),
        bc.gens.iter().map(name).collect::<Vec<_>>().join(", "),
        tga.dim(),
        tga.is_commutative(),
        center
    );
    let mut exit = 0;
    if let Some(sigma) = bc.lifted()? {
        let (g, a) = bc.lift.as_ref().expect("lifted");
        let h = &sigma.parent;
        let mut t = twist::doi_twist(h, &sigma)?;
        t.note = format!("Doi twist of k^G, |G| = {}, by a cocycle lifted through A = <{}>", g.order(), gens(a).join(", "));
        if let Some(n) = opts.conductor {
            t.exponent = n;
        }
        let r = t.verify();
        if !r.is_hopf() {
            exit = 1;
        }
        let coalgebra = t.comult == h.comult && t.counit == h.counit;
        text += &format!(
            "lift to k^G, |G| = {} through A = <{}>: cocycle trivial {}\ntwisted algebra: dim {}, Hopf {}, coalgebra unchanged {}\n{}",
            g.order(),
            gens(a).join(", "),
            sigma.is_trivial(),
            t.dim,
            r.is_hopf(),
            coalgebra,
            flags_text(&r)
        );
        // Cayley matrix, then the action on each orbit of points
        let mut certs = vec![("cayley".to_string(), magic::cayley_magic(h, g)?)];
        let mut covered = vec![false; g.degree()];
        for p in 0..g.degree() {
            if covered[p] {
                continue;
            }
            for q in g.elements().iter().map(|x| x.apply(p)) {
                covered[q] = true;
            }
            let k = g.stabilizer_of_point(p);
            if k.order() < g.order() {
                certs.push((format!("action on the orbit of {}", p + 1), magic::coset_magic(h, g, &k)?));
            }
        }
        let mut checks = Vec::new();
        for (label, c) in &certs {
            match twist::check_suff_twist(c, &sigma) {
                Ok(tc) => {
                    text += &format!(
                        "suff-twist, {label} (size {}): holds; magic in the twist, full {}\n",
                        c.size, tc.is_full_certificate
                    );
                    checks.push(json!({ "certificate": label, "size": c.size, "holds": true, "full": tc.is_full_certificate }));
                }
                Err(TwistError::ConditionFails { i, j, l, which, value }) => {
                    text += &format!(
                        "suff-twist, {label} (size {}): fails at ({i}, {j}, {l}), {which} = {value}\n",
                        c.size
                    );
                    checks.push(json!({
                        "certificate": label,
                        "size": c.size,
                        "holds": false,
                        "failure": { "i": i, "j": j, "l": l, "which": which, "value": value },
                    }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        out["lift"] = json!({
            "group_order": g.order(),
            "abelian": gens(a),
            "cocycle_trivial": sigma.is_trivial(),
            "twisted": { "dim": t.dim, "hopf": r, "coalgebra_unchanged": coalgebra },
            "suff_twist": checks,
        });
        if let Some(p) = save {
            save_json(p, &io::hopf_to_json(&t))?;
        }
    } else if save.is_some() {
        return Err(CliError::Usage("--save needs a [lift] section".into()));
    }
    Ok(Report { exit, json: out, text })
}

fn orbit_json(mp: &MatchedPair, side: Side) -> (Value, String) {
    let mut text = String::new();
    let mut list = Vec::new();
    for o in mp.orbits(side) {
        let members: Vec<String> = o
            .members
            .iter()
            .map(|&m| match side {
                Side::Left => name(mp.f.element(m)),
                Side::Right => mp.gamma_name(m).to_string(),
            })
            .collect();
        let stab: Vec<String> = o.stabilizer.elements().iter().map(name).collect();
        text += &format!("  {{{}}}  stabilizer of order {}: {{{}}}\n", members.join(", "), stab.len(), stab.join(", "));
        list.push(json!({ "members": members, "stabilizer": stab }));
    }
    (Value::Array(list), text)
}

fn report(path: &Path, opts: &Options) -> Result<Report, CliError> {
    let (f, b) = load_bicrossed(path, opts)?;
    let mp = &b.mp;
    let r = b.hopf.verify();
    let es = b.exact_sequence();
    let v = qpacert::full_pipeline(&Presentation::Bicrossed(b.clone()))?;
    let (left, lt) = orbit_json(mp, Side::Left);
    let (right, rt) = orbit_json(mp, Side::Right);
    let kernel = mp.trivially_acting_kernel();
    let json = json!({
        "description": f.description,
        "orders": { "G": mp.g.order(), "F": mp.nf(), "Gamma": mp.ngamma() },
        "split": b.is_split(),
        "orbits_of_gamma_on_f": left,
        "orbits_of_f_on_gamma": right,
        "trivially_acting_kernel": gens(&kernel),
        "actions_csv": mp.to_csv(),
        "hopf": r,
        "exact_sequence": es,
        "verdict": v.to_json(),
    });
    let mut text = String::new();
    if !f.description.is_empty() {
        text += &format!("{}\n", f.description);
    }
    text += &format!(
        "|G| = {}, |F| = {}, |Gamma| = {}, split {}\n",
        mp.g.order(),
        mp.nf(),
        mp.ngamma(),
        b.is_split()
    );
    text += &format!("orbits of Gamma on F:\n{lt}orbits of F on Gamma:\n{rt}");
    let kg = gens(&kernel);
    text += &format!("trivially acting kernel: {}\n", if kg.is_empty() { "1".into() } else { format!("<{}>", kg.join(", ")) });
    text += &format!("actions (g|>x | g<|x):\n{}", mp.to_csv());
    text += &format!("Hopf axioms: {}\n{}", r.is_hopf(), flags_text(&r));
    text += &format!("exact sequence: {} (dims {:?})\n", es.all(), es.dims);
    text += &v.to_text();
    Ok(Report { exit: status_exit(v.status), json, text })
}
