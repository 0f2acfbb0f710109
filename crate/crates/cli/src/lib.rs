//! The `treeharm` command line.
//!
//! Every subcommand prints a JSON envelope `{schema_version, command, result}`
//! or, where offered, plain CSV. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use tree_harmonic::dynamics::{self, InduceResult, RestrictResult};
use tree_harmonic::fell::{self, DualModel};
use tree_harmonic::haar;
use tree_harmonic::perm::{close_generators, Perm, PermGroup, DEFAULT_GROUP_CAP, MAX_ALT_DEGREE};
use tree_harmonic::radu::{self, Placement, RaduFamily, RaduVariant};
use tree_harmonic::rat::{self, Q};
use tree_harmonic::special::{self, SpecialKind};
use tree_harmonic::spherical::{self, GroupKind};
use tree_harmonic::tree::{
    automorphism_group_order, enumerate_automorphisms, Ball, BallAutomorphism, CenterSpec, Parity, TreeParams,
    VertexId, DEFAULT_ENUM_CAP,
};
use tree_harmonic::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Overrides the automorphism enumeration cap.
pub const CAP_ENV: &str = "TREEHARM_ENUM_CAP";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Parser, Debug)]
#[command(name = "treeharm", version, about = "Harmonic analysis on semi-regular trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spherical function values phi(tau^n)
    Spherical(SphericalArgs),
    /// Special function tables, defining relations and L2 norms
    Special(SpecialArgs),
    /// Positive-semidefiniteness of a radial kernel or a given matrix
    Psd(PsdArgs),
    /// Restriction, induction and change of reference vertex
    Dynamics(DynamicsArgs),
    /// Finite model of the dual space
    Fell(FellArgs),
    /// Double coset measures
    Coset(CosetArgs),
    /// Permutation group properties
    Perm(PermArgs),
    /// Legal colorings, local actions and sign-condition membership
    Radu {
        #[command(subcommand)]
        action: RaduAction,
    },
    /// Brute-force checks in ball automorphism groups
    Brute {
        #[command(subcommand)]
        action: BruteAction,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindName {
    Vt,
    TwoOrbit,
}

#[derive(Args, Debug, Clone)]
struct KindArgs {
    #[arg(long, value_enum)]
    kind: KindName,
    /// Degree of the reference vertex
    #[arg(long)]
    d: usize,
    /// Degree of the other vertex type (two-orbit only)
    #[arg(long)]
    dprime: Option<usize>,
}

impl KindArgs {
    fn group_kind(&self) -> CliResult<GroupKind> {
        let k = match (self.kind, self.dprime) {
            (KindName::Vt, None) => GroupKind::VertexTransitive { d: self.d },
            (KindName::Vt, Some(_)) => return usage("--dprime only applies to --kind two-orbit"),
            (KindName::TwoOrbit, Some(e)) => GroupKind::TwoOrbits { d: self.d, dprime: e },
            (KindName::TwoOrbit, None) => return usage("--kind two-orbit needs --dprime"),
        };
        k.validate()?;
        Ok(k)
    }

    /// Tree parameters with the reference vertex of type 0.
    fn params(&self) -> CliResult<TreeParams> {
        Ok(match self.group_kind()? {
            GroupKind::VertexTransitive { d } => TreeParams::vertex_transitive(d)?,
            GroupKind::TwoOrbits { d, dprime } => TreeParams::two_orbits(d, dprime)?,
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CenterName {
    /// A type-0 vertex
    Vertex,
    /// A type-1 vertex
    Vertex1,
    Edge,
}

impl CenterName {
    fn spec(self) -> CenterSpec {
        match self {
            CenterName::Vertex => CenterSpec::Vertex { parity: Parity::Zero },
            CenterName::Vertex1 => CenterSpec::Vertex { parity: Parity::One },
            CenterName::Edge => CenterSpec::Edge,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct BallArgs {
    #[command(flatten)]
    kind: KindArgs,
    #[arg(long)]
    radius: usize,
    #[arg(long, value_enum, default_value = "vertex")]
    center: CenterName,
}

impl BallArgs {
    fn ball(&self) -> CliResult<Ball> {
        Ok(Ball::new(self.kind.params()?, self.center.spec(), self.radius)?)
    }
}

#[derive(Args, Debug)]
struct SphericalArgs {
    #[command(flatten)]
    kind: KindArgs,
    /// Rational or decimal parameter alpha = phi(tau)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Real part of a unit complex number s; reports the principal-series parameter
    #[arg(long, allow_hyphen_values = true)]
    s_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    s_im: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SpecialName {
    VtPlus,
    VtMinus,
    TwoOrbit,
}

#[derive(Args, Debug)]
struct SpecialArgs {
    #[arg(long, value_enum)]
    kind: SpecialName,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    dprime: Option<usize>,
    #[arg(long, default_value_t = 10)]
    n: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct PsdArgs {
    #[arg(long, value_enum)]
    kind: Option<KindName>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    dprime: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    radius: Option<usize>,
    /// JSON file holding a square matrix as an array of rows
    #[arg(long, conflicts_with_all = ["kind", "alpha", "radius"])]
    matrix: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Degree of the neighbouring vertex type, for the change of reference vertex
    #[arg(long)]
    dprime: Option<usize>,
}

#[derive(Args, Debug)]
struct FellArgs {
    #[command(flatten)]
    kind: KindArgs,
    /// Limit parameter alpha*; reports every limit of spherical points approaching it
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long, default_value_t = 0)]
    cuspidal: u32,
    /// Drop the assumption that cuspidal points are isolated
    #[arg(long)]
    no_cuspidal_assumption: bool,
}

#[derive(Args, Debug)]
struct CosetArgs {
    #[command(flatten)]
    kind: KindArgs,
    #[arg(long, default_value_t = 5)]
    n_max: u32,
    /// Also compare with the orbit partition of a ball of this radius
    #[arg(long)]
    verify_radius: Option<usize>,
    #[arg(long, value_enum, default_value = "vertex")]
    center: CenterName,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum NamedGroup {
    Sym,
    Alt,
    Cyclic,
    Dihedral,
    Trivial,
}

#[derive(Args, Debug)]
struct PermArgs {
    #[arg(long)]
    degree: usize,
    /// Generator in 1-based cycle notation, e.g. "(1 2 3)(4 5)"; repeatable
    #[arg(long = "gen")]
    gens: Vec<String>,
    #[arg(long, value_enum, conflicts_with = "gens")]
    group: Option<NamedGroup>,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    cap: usize,
    /// List every element in one-line notation
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand, Debug)]
enum RaduAction {
    /// The ten smallest elements of the degree set Theta
    Theta,
    /// The canonical legal coloring of a ball
    Coloring(BallArgs),
    /// Local action of an automorphism at a vertex
    LocalAction {
        #[command(flatten)]
        ball: BallArgs,
        /// JSON object mapping vertex addresses to their images; unlisted vertices are fixed
        #[arg(long)]
        automorphism: Option<std::path::PathBuf>,
        /// Vertex address such as "0/2", or "root"
        #[arg(long)]
        vertex: String,
    },
    /// Membership of an automorphism in one of the twelve families
    Membership {
        #[command(flatten)]
        ball: BallArgs,
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long)]
        automorphism: Option<std::path::PathBuf>,
    },
    /// Cocycle identity over the whole ball group
    Cocycle(BallArgs),
}

#[derive(Args, Debug)]
struct VariantArgs {
    /// Family number 1..=12 or name such as plus_y0_y1
    #[arg(long)]
    family: String,
    /// Comma-separated radii
    #[arg(long, value_delimiter = ',')]
    x: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    y0: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    y1: Vec<u32>,
}

#[derive(Subcommand, Debug)]
enum BruteAction {
    /// Automorphism group order, predicted and enumerated
    Order {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        type_preserving: bool,
    },
    /// Orbit partition of the centre stabilizer against double coset measures
    Partition(BallArgs),
    /// Independence property IP_k at an edge
    Ipk {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        k: usize,
        /// Two adjacent addresses, e.g. "root,0"
        #[arg(long)]
        edge: String,
    },
    /// Factorization condition (i): search for W with Fix(U) ⊆ Fix(W) ⊆ Fix(V)Fix(U)
    Factorization {
        #[command(flatten)]
        ball: BallArgs,
        /// "v:ADDR:R" or "e:ADDR,ADDR:R"
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
}

/// Runs the command line and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                2
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn envelope(command: &str, result: Value) -> String {
    let v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "result": result });
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn enum_cap() -> CliResult<u64> {
    match std::env::var(CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .or_else(|_| usage(format!("{CAP_ENV}={s:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn parse_q(flag: &str, s: &str) -> CliResult<Q> {
    rat::parse(s).or_else(|_| usage(format!("--{flag} {s:?} is not a rational number")))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn dispatch(cmd: Command) -> CliResult<String> {
    match cmd {
        Command::Spherical(a) => cmd_spherical(a),
        Command::Special(a) => cmd_special(a),
        Command::Psd(a) => cmd_psd(a),
        Command::Dynamics(a) => cmd_dynamics(a),
        Command::Fell(a) => cmd_fell(a),
        Command::Coset(a) => cmd_coset(a),
        Command::Perm(a) => cmd_perm(a),
        Command::Radu { action } => cmd_radu(action),
        Command::Brute { action } => cmd_brute(action),
    }
}

fn cmd_spherical(a: SphericalArgs) -> CliResult<String> {
    let kind = a.kind.group_kind()?;
    let alpha = a.alpha.as_deref().map(|s| parse_q("alpha", s)).transpose()?;
    if alpha.is_none() && a.s_re.is_none() {
        return usage("spherical needs --alpha or --s-re");
    }
    let interval = spherical::param_interval(kind)?;
    let seq = alpha
        .as_ref()
        .map(|al| spherical::spherical_sequence(kind, al, a.n))
        .transpose()?;
    if a.format == Format::Csv {
        let Some(seq) = seq else {
            return usage("--format csv needs --alpha");
        };
        let mut s = String::from("n,phi_num,phi_den\n");
        for (n, v) in seq.iter().enumerate() {
            s.push_str(&format!("{n},{},{}\n", v.numer(), v.denom()));
        }
        return Ok(s);
    }
    let mut result = json!({
        "kind": kind,
        "interval": { "lo": rat::fmt(&interval.lo), "hi": rat::fmt(&interval.hi) },
    });
    if let (Some(al), Some(seq)) = (&alpha, &seq) {
        result["alpha"] = json!(rat::fmt(al));
        result["in_interval"] = json!(interval.contains(al));
        result["phi"] = json!(seq.iter().map(rat::fmt).collect::<Vec<_>>());
    }
    if let Some(re) = a.s_re {
        let p = spherical::principal_param(kind, Complex64::new(re, a.s_im))?;
        let pi = spherical::principal_interval(kind)?;
        result["principal"] = json!({ "alpha": p, "interval": { "lo": pi.lo, "hi": pi.hi } });
    }
    Ok(envelope("spherical", result))
}

fn cmd_special(a: SpecialArgs) -> CliResult<String> {
    let (kind, params) = match (a.kind, a.dprime) {
        (SpecialName::VtPlus, None) => (SpecialKind::VtPlus, TreeParams::vertex_transitive(a.d)?),
        (SpecialName::VtMinus, None) => (SpecialKind::VtMinus, TreeParams::vertex_transitive(a.d)?),
        (SpecialName::TwoOrbit, Some(e)) => (SpecialKind::TwoOrbitSigma, TreeParams::two_orbits(a.d, e)?),
        (SpecialName::TwoOrbit, None) => return usage("--kind two-orbit needs --dprime"),
        (_, Some(_)) => return usage("--dprime only applies to --kind two-orbit"),
    };
    let table = special::special_sequence(kind, &params, a.n)?;
    if a.format == Format::Csv {
        let mut s = String::from("family,n,phi_num,phi_den\n");
        for (tag, v) in table.entries() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                tag.family_name(),
                tag.index(),
                v.numer(),
                v.denom()
            ));
        }
        return Ok(s);
    }
    let rel = special::verify_defining_relations(&table);
    let partial = special::l2_partial(kind, &params, a.n)?;
    let closed = special::l2_closed_form(kind, &params)?;
    let (c, r) = special::l2_tail_bound(kind, &params)?;
    Ok(envelope(
        "special",
        json!({
            "table": table.to_json(),
            "relations": to_json(&rel),
            "l2_partial": rat::fmt(&partial),
            "l2_partial_f64": rat::to_f64(&partial),
            "l2_closed_form": rat::fmt(&closed),
            "l2_closed_form_f64": rat::to_f64(&closed),
            "tail_bound": { "constant": rat::fmt(&c), "ratio": rat::fmt(&r) },
        }),
    ))
}

fn cmd_psd(a: PsdArgs) -> CliResult<String> {
    if let Some(path) = a.matrix {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{} is not a JSON matrix: {e}", path.display())))?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("matrix is not square".into()).into());
        }
        let m = nalgebra_matrix(n, &rows);
        let v = spherical::psd_check(&m, a.tol)?;
        return Ok(envelope(
            "psd",
            json!({ "dimension": n, "tol": a.tol, "verdict": to_json(&v) }),
        ));
    }
    let (Some(kind), Some(d), Some(alpha), Some(radius)) = (a.kind, a.d, a.alpha.as_deref(), a.radius) else {
        return usage("psd needs either --matrix or --kind, --d, --alpha and --radius");
    };
    let ka = KindArgs {
        kind,
        d,
        dprime: a.dprime,
    };
    let gk = ka.group_kind()?;
    let alpha = parse_q("alpha", alpha)?;
    let ball = Ball::new(ka.params()?, CenterSpec::Vertex { parity: Parity::Zero }, radius)?;
    let m = spherical::radial_gram(&ball, gk, &alpha)?;
    let v = spherical::psd_check(&m, a.tol)?;
    Ok(envelope(
        "psd",
        json!({
            "kind": gk,
            "alpha": rat::fmt(&alpha),
            "radius": radius,
            "dimension": m.nrows(),
            "tol": a.tol,
            "verdict": to_json(&v),
        }),
    ))
}

fn nalgebra_matrix(n: usize, rows: &[Vec<f64>]) -> spherical::Matrix {
    spherical::Matrix::from_fn(n, n, |i, j| rows[i][j])
}

fn restrict_json(r: &RestrictResult) -> Value {
    match r {
        RestrictResult::Single { gamma } => json!({ "gamma": rat::fmt(gamma) }),
        RestrictResult::ExceptionalPair => json!({ "exceptional_pair": ["pi_v", "pi_v'"] }),
    }
}

fn induce_json(r: &InduceResult) -> Value {
    match r {
        InduceResult::Pair {
            alpha_minus,
            alpha_plus,
        } => {
            let one = |s: &dynamics::SqrtValue| json!({ "value": s.value, "exact": s.exact.as_ref().map(rat::fmt) });
            json!({ "alpha_minus": one(alpha_minus), "alpha_plus": one(alpha_plus) })
        }
        InduceResult::ExceptionalImage { alpha } => json!({ "exceptional_image": rat::fmt(alpha) }),
    }
}

fn cmd_dynamics(a: DynamicsArgs) -> CliResult<String> {
    let alpha = a.alpha.as_deref().map(|s| parse_q("alpha", s)).transpose()?;
    let gamma = a.gamma.as_deref().map(|s| parse_q("gamma", s)).transpose()?;
    if alpha.is_none() && gamma.is_none() {
        return usage("dynamics needs --alpha or --gamma");
    }
    let mut result = json!({ "d": a.d, "special": to_json(&dynamics::special_dynamics(a.d)?) });
    if let Some(al) = &alpha {
        result["alpha"] = json!(rat::fmt(al));
        if let Some(e) = a.dprime {
            let b = dynamics::base_change(a.d, e, al)?;
            result["base_change"] = json!({
                "dprime": e,
                "alpha_vprime": rat::fmt(&b.alpha_vprime),
                "exceptional_endpoint": b.exceptional_endpoint,
            });
        } else {
            let r = dynamics::restrict_to_plus(a.d, al)?;
            result["restrict"] = restrict_json(&r);
            if let RestrictResult::Single { gamma } = &r {
                result["round_trip"] = induce_json(&dynamics::induce_from_plus(a.d, gamma)?);
            }
        }
    }
    if let Some(g) = &gamma {
        result["gamma"] = json!(rat::fmt(g));
        result["induce"] = induce_json(&dynamics::induce_from_plus(a.d, g)?);
    }
    Ok(envelope("dynamics", result))
}

fn cmd_fell(a: FellArgs) -> CliResult<String> {
    let kind = a.kind.group_kind()?;
    let model: DualModel = fell::dual_model(kind, a.cuspidal)?.with_assumption(!a.no_cuspidal_assumption);
    let mut result = json!({ "model": model.to_json()? });
    if let Some(t) = a.target.as_deref() {
        let t = parse_q("target", t)?;
        let ls = fell::limit_set(kind, &t)?;
        result["target"] = json!(rat::fmt(&t));
        result["limit_set"] = json!(ls.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    }
    Ok(envelope("fell", result))
}

fn cmd_coset(a: CosetArgs) -> CliResult<String> {
    let params = a.kind.params()?;
    let rows = haar::measure_rows(&params, a.n_max)?;
    if a.format == Format::Csv {
        if a.verify_radius.is_some() {
            return usage("--verify-radius is only reported in JSON");
        }
        return Ok(haar::rows_to_csv(&rows)?);
    }
    let mut result = json!({ "params": to_json(&params), "rows": to_json(&rows) });
    if let Some(r) = a.verify_radius {
        let ball = Ball::new(params, a.center.spec(), r)?;
        result["partition"] = to_json(&haar::verify_coset_partition(&ball, enum_cap()?)?);
    }
    Ok(envelope("coset", result))
}

fn cmd_perm(a: PermArgs) -> CliResult<String> {
    let n = a.degree;
    let group = match a.group {
        Some(NamedGroup::Sym) => PermGroup::symmetric(n)?,
        Some(NamedGroup::Alt) => PermGroup::alternating(n)?,
        Some(NamedGroup::Cyclic) => PermGroup::cyclic(n)?,
        Some(NamedGroup::Dihedral) => PermGroup::dihedral(n)?,
        Some(NamedGroup::Trivial) => PermGroup::trivial(n),
        None => {
            let gens = a
                .gens
                .iter()
                .map(|g| Perm::parse_cycles(g, n).map_err(|e| CliError::Usage(e.to_string())))
                .collect::<CliResult<Vec<_>>>()?;
            close_generators(n, &gens, a.cap)?
        }
    };
    let two = if n >= 2 { Some(group.is_two_transitive()?) } else { None };
    let mut result = json!({
        "degree": n,
        "order": group.order(),
        "generators": group.generators().iter().map(|g| g.to_cycle_string()).collect::<Vec<_>>(),
        "conjugacy_classes": group.conjugacy_class_count(),
        "two_transitive": two,
        "orbits_on_pairs": if n >= 2 { Some(group.orbit_count_on_pairs()?) } else { None },
        "standard_rep_exists": if two == Some(true) { Some(group.standard_rep_exists_2trans()?) } else { None },
        "contains_alternating": if n <= MAX_ALT_DEGREE { Some(group.contains_alternating()?) } else { None },
    });
    if a.list {
        result["elements"] = json!(group.elements().iter().map(|p| p.one_line()).collect::<Vec<_>>());
    }
    Ok(envelope("perm", result))
}

fn vertex_arg(ball: &Ball, s: &str) -> CliResult<VertexId> {
    let s = s.trim();
    Ok(ball.parse_vertex(if s == "root" { "" } else { s })?)
}

fn read_automorphism(ball: &Ball, path: &Option<std::path::PathBuf>) -> CliResult<BallAutomorphism> {
    let Some(path) = path else {
        return Ok(BallAutomorphism::identity(ball));
    };
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let map: BTreeMap<String, String> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not an address map: {e}", path.display())))?;
    let norm = |s: &String| if s == "root" { String::new() } else { s.clone() };
    // unlisted vertices are fixed
    let mut full: BTreeMap<String, String> = ball
        .vertices()
        .map(|v| (ball.addr_string(v), ball.addr_string(v)))
        .collect();
    full.extend(map.iter().map(|(k, v)| (norm(k), norm(v))));
    Ok(BallAutomorphism::from_json(ball, &full)?)
}

fn parse_family(s: &str) -> CliResult<RaduFamily> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(RaduFamily::from_number(n)?);
    }
    serde_json::from_value(json!(s)).or_else(|_| usage(format!("unknown family {s:?}")))
}

fn cmd_radu(action: RaduAction) -> CliResult<String> {
    match action {
        RaduAction::Theta => Ok(envelope("radu theta", json!({ "theta_prefix": radu::theta_prefix() }))),
        RaduAction::Coloring(b) => {
            let ball = b.ball()?;
            let c = radu::canonical_legal_coloring(&ball);
            Ok(envelope("radu coloring", json!({ "colors": c.to_json(&ball) })))
        }
        RaduAction::LocalAction {
            ball,
            automorphism,
            vertex,
        } => {
            let ball = ball.ball()?;
            let g = read_automorphism(&ball, &automorphism)?;
            let v = vertex_arg(&ball, &vertex)?;
            let c = radu::canonical_legal_coloring(&ball);
            let p = radu::local_action(&ball, &c, &g, v)?;
            Ok(envelope(
                "radu local-action",
                json!({
                    "vertex": ball.addr_string(v),
                    "cycles": p.to_cycle_string(),
                    "one_line": p.one_line(),
                    "sign": p.sign(),
                }),
            ))
        }
        RaduAction::Membership {
            ball,
            variant,
            automorphism,
        } => {
            let ball = ball.ball()?;
            let family = parse_family(&variant.family)?;
            let var = RaduVariant::new(family, &variant.x, &variant.y0, &variant.y1)?;
            let g = read_automorphism(&ball, &automorphism)?;
            let c = radu::canonical_legal_coloring(&ball);
            let rep = radu::variant_membership(&ball, &c, &g, &var)?;
            Ok(envelope(
                "radu membership",
                json!({ "family_number": family.number(), "report": to_json(&rep) }),
            ))
        }
        RaduAction::Cocycle(b) => {
            let ball = b.ball()?;
            let group = enumerate_automorphisms(&ball, false, enum_cap()?)?;
            let c = radu::canonical_legal_coloring(&ball);
            Ok(envelope(
                "radu cocycle",
                to_json(&radu::verify_cocycle_exhaustive(&ball, &c, &group)?),
            ))
        }
    }
}

fn parse_placement(ball: &Ball, s: &str) -> CliResult<Placement> {
    let bad = || CliError::Usage(format!("placement {s:?} is not v:ADDR:R or e:ADDR,ADDR:R"));
    let parts: Vec<&str> = s.split(':').collect();
    let [kind, at, r] = parts[..] else { return Err(bad()) };
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "v" => Ok(Placement::vertex(vertex_arg(ball, at)?, r)),
        "e" => {
            let (x, y) = at.split_once(',').ok_or_else(bad)?;
            Ok(Placement::edge(vertex_arg(ball, x)?, vertex_arg(ball, y)?, r))
        }
        _ => Err(bad()),
    }
}

fn cmd_brute(action: BruteAction) -> CliResult<String> {
    let cap = enum_cap()?;
    match action {
        BruteAction::Order { ball, type_preserving } => {
            let ball = ball.ball()?;
            let predicted = automorphism_group_order(&ball, type_preserving);
            let enumerated = enumerate_automorphisms(&ball, type_preserving, cap)?.len();
            Ok(envelope(
                "brute order",
                json!({ "vertices": ball.len(), "predicted": predicted.to_string(), "enumerated": enumerated }),
            ))
        }
        BruteAction::Partition(b) => {
            let ball = b.ball()?;
            Ok(envelope(
                "brute partition",
                to_json(&haar::verify_coset_partition(&ball, cap)?),
            ))
        }
        BruteAction::Ipk { ball, k, edge } => {
            let ball = ball.ball()?;
            let (x, y) = edge
                .split_once(',')
                .ok_or_else(|| CliError::Usage("--edge takes ADDR,ADDR".into()))?;
            let e = (vertex_arg(&ball, x)?, vertex_arg(&ball, y)?);
            Ok(envelope("brute ipk", to_json(&radu::check_ipk(&ball, k, e, cap)?)))
        }
        BruteAction::Factorization { ball, u, v } => {
            let ball = ball.ball()?;
            let (u, v) = (parse_placement(&ball, &u)?, parse_placement(&ball, &v)?);
            Ok(envelope(
                "brute factorization",
                to_json(&radu::check_factorization_i(&ball, &u, &v, cap)?),
            ))
        }
    }
}
