//! Command definitions and execution for the `aghkit` binary.
//!
//! Every command resolves its input (a file in one of the documented text
//! formats, or a named family), runs the corresponding library pipeline and
//! renders the result as JSON (the machine format, pinned by golden tests)
//! or as an aligned table. Exit codes are part of the contract: 0 on
//! success, 1 when a computation fails an internal consistency check, 2 for
//! bad input.

pub mod corpus;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use aghkit::ehrhart::{
    count_from_hstar, idp_check, reciprocity_check, EhrhartProfile, HVector,
};
use aghkit::gorenstein::{classify, AGReport, RingProfile};
use aghkit::hibi::{
    enumerate_strict_maps, is_decomposable, min_strict_degree, minimal_generators_with_cap,
    GeneratorSet, DEFAULT_SIZE_CAP,
};
use aghkit::polytope::LatticePolytope;
use aghkit::poset::{h_vector_from_descents, Poset};
use aghkit::xi::{build_context, verify_bijection, xi, BijectionReport, ClauseResult};

#[derive(Debug)]
pub enum CliError {
    Tool(aghkit::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
    /// A verification or golden comparison failed: exit code 1.
    Verification(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Tool(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Verification(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<aghkit::Error> for CliError {
    fn from(e: aghkit::Error) -> Self {
        CliError::Tool(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Tool(e) => e.exit_code(),
            CliError::Io(..) | CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "aghkit",
    about = "Exact h-vectors and almost Gorenstein invariants of lattice polytopes and Hibi rings",
    version
)]
pub struct Cli {
    /// Output format: machine JSON or an aligned table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for enumeration (defaults to all cores).
    #[arg(long, global = true, env = "AGHKIT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// h*-vector and Ehrhart data of a lattice polytope.
    Hstar {
        /// Polytope file (`dim d` header, one vertex per line).
        file: Option<PathBuf>,
        /// Named family instead of a file: cross:E, pm:M or qm:M
        /// (poset families mean their order polytopes).
        #[arg(long)]
        family: Option<String>,
        /// Run the reciprocity and extrapolation consistency checks.
        #[arg(long)]
        verify: bool,
        /// Probe the integer decomposition property for dilates 2..=N
        /// (0 or 1 disables the probe).
        #[arg(long, default_value_t = 4)]
        idp_max: usize,
    },
    /// Descent-statistic h-vector of a poset.
    PosetHstar {
        /// Poset file (`elements n` header, one `i < j` relation per line).
        file: Option<PathBuf>,
        /// Named family instead of a file: pm:M or qm:M.
        #[arg(long)]
        family: Option<String>,
        /// Recompute the h-vector geometrically and require equality.
        #[arg(long)]
        cross_check: bool,
    },
    /// Gorenstein / almost Gorenstein classification of an h-vector.
    Classify {
        /// Comma-separated h-vector, e.g. 1,4,7,1.
        h: String,
        /// Cohen-Macaulay type, when known.
        #[arg(long = "type")]
        cm_type: Option<BigInt>,
        /// Assert that the ring is a domain.
        #[arg(long)]
        domain: bool,
    },
    /// Minimal canonical-ideal generators and Cohen-Macaulay type of a
    /// Hibi ring.
    HibiType {
        /// Poset file.
        file: Option<PathBuf>,
        /// Named family instead of a file: pm:M or qm:M.
        #[arg(long)]
        family: Option<String>,
        /// Override the enumeration degree window (diagnostic; a cap below
        /// the sound window can miss generators).
        #[arg(long)]
        degree_cap: Option<u32>,
        /// Poset size cap for the exponential search.
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
    },
    /// Verify the descent-complementing bijection for the pm family.
    XiVerify {
        /// Family parameter m >= 3.
        m: usize,
    },
    /// Write an input file for a named family.
    Family {
        /// Family spec: cross:E, pm:M or qm:M.
        spec: String,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in golden corpus and fail on any mismatch.
    CorpusRun {
        /// Include entries marked slow (minutes of runtime).
        #[arg(long)]
        slow: bool,
    },
}

/// A parsed `name:param` family reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Cross(usize),
    Pm(usize),
    Qm(usize),
}

impl FamilySpec {
    pub fn parse(s: &str) -> CliResult<FamilySpec> {
        let (name, param) = s.split_once(':').ok_or_else(|| {
            CliError::Usage(format!("family spec must look like name:param, got {s:?}"))
        })?;
        let param: usize = param
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad family parameter in {s:?}")))?;
        match name.trim() {
            "cross" => Ok(FamilySpec::Cross(param)),
            "pm" => Ok(FamilySpec::Pm(param)),
            "qm" => Ok(FamilySpec::Qm(param)),
            other => Err(CliError::Usage(format!(
                "unknown family {other:?} (expected cross, pm or qm)"
            ))),
        }
    }

    pub fn poset(self) -> CliResult<Poset> {
        match self {
            FamilySpec::Pm(m) => Ok(Poset::family_pm(m)?),
            FamilySpec::Qm(m) => Ok(Poset::family_qm(m)?),
            FamilySpec::Cross(_) => Err(CliError::Usage(
                "the cross family is a polytope, not a poset".into(),
            )),
        }
    }

    pub fn polytope(self) -> CliResult<LatticePolytope> {
        match self {
            FamilySpec::Cross(e) => Ok(LatticePolytope::make_cross_plus(e)?),
            FamilySpec::Pm(_) | FamilySpec::Qm(_) => {
                Ok(LatticePolytope::order_polytope(&self.poset()?)?)
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cross(e) => write!(f, "cross:{e}"),
            FamilySpec::Pm(m) => write!(f, "pm:{m}"),
            FamilySpec::Qm(m) => write!(f, "qm:{m}"),
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Hstar {
            file,
            family,
            verify,
            idp_max,
        } => cmd_hstar(file.as_deref(), family.as_deref(), *verify, *idp_max, cli.format, out),
        Command::PosetHstar {
            file,
            family,
            cross_check,
        } => cmd_poset_hstar(file.as_deref(), family.as_deref(), *cross_check, cli.format, out),
        Command::Classify { h, cm_type, domain } => {
            cmd_classify(h, cm_type.clone(), *domain, cli.format, out)
        }
        Command::HibiType {
            file,
            family,
            degree_cap,
            size_cap,
        } => cmd_hibi_type(
            file.as_deref(),
            family.as_deref(),
            *degree_cap,
            *size_cap,
            cli.format,
            out,
        ),
        Command::XiVerify { m } => cmd_xi_verify(*m, cli.format, out),
        Command::Family { spec, out: path } => cmd_family(spec, path.as_deref(), out),
        Command::CorpusRun { slow } => corpus::run(*slow, out),
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_polytope(file: Option<&Path>, family: Option<&str>) -> CliResult<LatticePolytope> {
    match (file, family) {
        (Some(path), None) => Ok(LatticePolytope::parse(&read_file(path)?)?),
        (None, Some(spec)) => FamilySpec::parse(spec)?.polytope(),
        _ => Err(CliError::Usage(
            "provide exactly one of a polytope file or --family".into(),
        )),
    }
}

fn load_poset(file: Option<&Path>, family: Option<&str>) -> CliResult<Poset> {
    match (file, family) {
        (Some(path), None) => Ok(Poset::parse(&read_file(path)?)?),
        (None, Some(spec)) => FamilySpec::parse(spec)?.poset(),
        _ => Err(CliError::Usage(
            "provide exactly one of a poset file or --family".into(),
        )),
    }
}

fn big_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn bigs_to_json(vs: &[BigInt]) -> Value {
    Value::Array(vs.iter().map(big_to_json).collect())
}

fn emit(out: &mut dyn Write, value: &Value) -> CliResult<()> {
    let rendered = serde_json::to_string_pretty(value).expect("serializable value");
    writeln!(out, "{rendered}").map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
}

fn emit_table(out: &mut dyn Write, rows: &[(String, String)]) -> CliResult<()> {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}").map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))?;
    }
    Ok(())
}

fn cmd_hstar(
    file: Option<&Path>,
    family: Option<&str>,
    verify: bool,
    idp_max: usize,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let polytope = load_polytope(file, family)?;
    let d = polytope.dim();
    let n_max = if verify { d + 1 } else { d };
    let profile = EhrhartProfile::compute(&polytope, n_max)?;

    let (reciprocity_ok, extrapolation_ok) = if verify {
        let recip = reciprocity_check(&profile)?;
        let extra = profile.counts[d + 1]
            == count_from_hstar(&profile.hstar, d, d + 1);
        (Some(recip), Some(extra))
    } else {
        (None, None)
    };

    let idp = if idp_max >= 2 {
        idp_check(&polytope, idp_max)?
    } else {
        Default::default()
    };

    let mut idp_json = Map::new();
    for (n, ok) in &idp {
        idp_json.insert(n.to_string(), json!(ok));
    }
    let value = json!({
        "dim": d,
        "counts": bigs_to_json(&profile.counts),
        "h_star": bigs_to_json(profile.hstar.coeffs()),
        "socle_degree": profile.geometric_socle,
        "reciprocity_ok": reciprocity_ok,
        "extrapolation_ok": extrapolation_ok,
        "idp": Value::Object(idp_json),
    });

    match format {
        Format::Json => emit(out, &value)?,
        Format::Table => {
            let mut rows = vec![
                ("dim".to_string(), d.to_string()),
                ("h*".to_string(), profile.hstar.to_string()),
                ("socle degree".to_string(), profile.geometric_socle.to_string()),
                (
                    "counts".to_string(),
                    profile
                        .counts
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            ];
            if let Some(r) = reciprocity_ok {
                rows.push(("reciprocity".into(), if r { "ok".into() } else { "FAIL".into() }));
            }
            if let Some(r) = extrapolation_ok {
                rows.push(("extrapolation".into(), if r { "ok".into() } else { "FAIL".into() }));
            }
            if !idp.is_empty() {
                rows.push((
                    "idp".into(),
                    idp.iter()
                        .map(|(n, ok)| format!("{n}:{}", if *ok { "ok" } else { "no" }))
                        .collect::<Vec<_>>()
                        .join(" "),
                ));
            }
            emit_table(out, &rows)?;
        }
    }

    if reciprocity_ok == Some(false) || extrapolation_ok == Some(false) {
        return Err(CliError::Verification(
            "verification failed: counts and h*-vector are inconsistent".into(),
        ));
    }
    Ok(())
}

fn cmd_poset_hstar(
    file: Option<&Path>,
    family: Option<&str>,
    cross_check: bool,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let poset = load_poset(file, family)?;
    let profile = h_vector_from_descents(&poset)?;

    let cross_check_ok = if cross_check {
        let geometric = aghkit::ehrhart::h_star(&LatticePolytope::order_polytope(&poset)?)?;
        Some(geometric == profile.h)
    } else {
        None
    };

    let value = json!({
        "elements": poset.len(),
        "h_vector": bigs_to_json(profile.h.coeffs()),
        "extensions": profile.extension_count,
        "socle_degree": profile.socle_degree,
        "cross_check_ok": cross_check_ok,
    });
    match format {
        Format::Json => emit(out, &value)?,
        Format::Table => {
            let mut rows = vec![
                ("elements".to_string(), poset.len().to_string()),
                ("h-vector".to_string(), profile.h.to_string()),
                ("extensions".to_string(), profile.extension_count.to_string()),
                ("socle degree".to_string(), profile.socle_degree.to_string()),
            ];
            if let Some(ok) = cross_check_ok {
                rows.push((
                    "geometric cross-check".into(),
                    if ok { "ok".into() } else { "FAIL".into() },
                ));
            }
            emit_table(out, &rows)?;
        }
    }

    if cross_check_ok == Some(false) {
        return Err(CliError::Verification(
            "descent and geometric h-vectors disagree".into(),
        ));
    }
    Ok(())
}

fn parse_h_list(input: &str) -> CliResult<HVector> {
    let coeffs: Result<Vec<BigInt>, _> = input
        .split(',')
        .map(|tok| tok.trim().parse::<BigInt>())
        .collect();
    let coeffs =
        coeffs.map_err(|_| CliError::Usage(format!("cannot parse h-vector {input:?}")))?;
    Ok(HVector::new(coeffs)?)
}

fn report_to_json(report: &AGReport) -> Value {
    json!({
        "verdict": report.verdict.to_string(),
        "e_C": big_to_json(&report.e_c),
        "mu_C": report.mu_c.as_ref().map(big_to_json),
        "diffs": bigs_to_json(&report.cumulative_diffs),
        "rules": report.criteria_fired,
        "warnings": report.warnings,
    })
}

fn cmd_classify(
    h: &str,
    cm_type: Option<BigInt>,
    domain: bool,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let h = parse_h_list(h)?;
    // The CLI evaluates profiles under the degree-0 embedding hypothesis;
    // for domains it holds automatically.
    let mut profile = RingProfile::new(h, domain, true);
    if let Some(r) = cm_type {
        profile = profile.with_cm_type(r);
    }
    let report = classify(&profile)?;
    match format {
        Format::Json => emit(out, &report_to_json(&report))?,
        Format::Table => {
            let mut rows = vec![
                ("verdict".to_string(), report.verdict.to_string()),
                ("e(C)".to_string(), report.e_c.to_string()),
                (
                    "mu(C)".to_string(),
                    report
                        .mu_c
                        .as_ref()
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".into()),
                ),
                (
                    "diffs".to_string(),
                    report
                        .cumulative_diffs
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
                ("rules".to_string(), report.criteria_fired.join(", ")),
            ];
            for w in &report.warnings {
                rows.push(("warning".into(), w.clone()));
            }
            emit_table(out, &rows)?;
        }
    }
    Ok(())
}

fn generator_set_json(poset: &Poset, gens: &GeneratorSet, warnings: &[String]) -> Value {
    let mut histogram = Map::new();
    for (deg, count) in &gens.degree_histogram {
        histogram.insert(deg.to_string(), json!(count));
    }
    json!({
        "elements": poset.len(),
        "min_degree": gens.min_degree,
        "socle_degree": gens.socle_degree,
        "degree_histogram": Value::Object(histogram),
        "cm_type": gens.cm_type,
        "generators": gens
            .generators
            .iter()
            .map(|g| json!({ "values": g.values(), "bottom": g.degree() }))
            .collect::<Vec<_>>(),
        "warnings": warnings,
    })
}

fn cmd_hibi_type(
    file: Option<&Path>,
    family: Option<&str>,
    degree_cap: Option<u32>,
    size_cap: usize,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let poset = load_poset(file, family)?;
    let mut warnings = Vec::new();

    let gens = match degree_cap {
        None => minimal_generators_with_cap(&poset, size_cap)?,
        Some(cap) => {
            // Diagnostic mode: enumerate up to the requested degree only.
            let sound_top =
                min_strict_degree(&poset) + (poset.len() - poset.longest_chain()).max(1) as u32 - 1;
            if cap < sound_top {
                warnings.push(format!(
                    "degree cap {cap} is below the sound window top {sound_top}; \
                     generators may be missing"
                ));
            }
            if cap < min_strict_degree(&poset) {
                warnings.push(format!(
                    "degree cap {cap} is below the minimal strict degree {}; no maps exist",
                    min_strict_degree(&poset)
                ));
            }
            if poset.len() > size_cap {
                return Err(CliError::Tool(aghkit::Error::SizeCap(format!(
                    "generator enumeration is capped at {size_cap} elements (poset has {}); \
                     raise --size-cap to override",
                    poset.len()
                ))));
            }
            let mut generators = Vec::new();
            let mut histogram = std::collections::BTreeMap::new();
            for map in enumerate_strict_maps(&poset, cap) {
                if !is_decomposable(&map, &poset)? {
                    *histogram.entry(map.degree()).or_insert(0u64) += 1;
                    generators.push(map);
                }
            }
            GeneratorSet {
                cm_type: generators.len() as u64,
                generators,
                degree_histogram: histogram,
                min_degree: min_strict_degree(&poset),
                socle_degree: poset.len() - poset.longest_chain(),
            }
        }
    };

    match format {
        Format::Json => emit(out, &generator_set_json(&poset, &gens, &warnings))?,
        Format::Table => {
            let mut rows = vec![
                ("elements".to_string(), poset.len().to_string()),
                ("minimal degree".to_string(), gens.min_degree.to_string()),
                ("socle degree".to_string(), gens.socle_degree.to_string()),
                ("cm type".to_string(), gens.cm_type.to_string()),
                (
                    "degree histogram".to_string(),
                    gens.degree_histogram
                        .iter()
                        .map(|(d, c)| format!("{d}:{c}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            ];
            for g in &gens.generators {
                rows.push((
                    "generator".into(),
                    format!("values {:?} bottom {}", g.values(), g.degree()),
                ));
            }
            for w in &warnings {
                rows.push(("warning".into(), w.clone()));
            }
            emit_table(out, &rows)?;
        }
    }
    Ok(())
}

fn clause_json(c: &ClauseResult) -> Value {
    json!({ "passed": c.passed, "counterexample": c.counterexample })
}

fn bijection_report_json(report: &BijectionReport, pairs: &[(String, String)]) -> Value {
    json!({
        "m": report.m,
        "stratum_sizes": report.stratum_sizes,
        "clauses": {
            "descent_complement": clause_json(&report.descent_complement),
            "order_preserving": clause_json(&report.order_preserving),
            "bijective": clause_json(&report.bijective),
            "forbidden_case": clause_json(&report.forbidden_case),
        },
        "all_passed": report.all_passed(),
        "pairs": pairs
            .iter()
            .map(|(a, b)| json!([a, b]))
            .collect::<Vec<_>>(),
    })
}

fn cmd_xi_verify(m: usize, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let context = build_context(m)?;
    let report = verify_bijection(&context)?;
    let mut pairs = Vec::new();
    for i in 0..=m {
        for perm in context.stratum(i) {
            let image = xi(&context, perm)?;
            pairs.push((perm.to_string(), image.to_string()));
        }
    }

    match format {
        Format::Json => emit(out, &bijection_report_json(&report, &pairs))?,
        Format::Table => {
            let clause = |c: &ClauseResult| -> String {
                if c.passed {
                    "pass".into()
                } else {
                    format!("FAIL ({})", c.counterexample.as_deref().unwrap_or("?"))
                }
            };
            let rows = vec![
                ("m".to_string(), m.to_string()),
                (
                    "stratum sizes".to_string(),
                    report
                        .stratum_sizes
                        .iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
                ("descent complement".to_string(), clause(&report.descent_complement)),
                ("order preserving".to_string(), clause(&report.order_preserving)),
                ("bijective".to_string(), clause(&report.bijective)),
                ("forbidden case".to_string(), clause(&report.forbidden_case)),
            ];
            emit_table(out, &rows)?;
            for (a, b) in &pairs {
                writeln!(out, "{a} -> {b}")
                    .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))?;
            }
        }
    }

    if !report.all_passed() {
        return Err(CliError::Verification(format!(
            "bijection verification failed for m = {m}"
        )));
    }
    Ok(())
}

/// Renders the text-format input file for a family, with a comment header.
pub fn family_file(spec: FamilySpec) -> CliResult<String> {
    let header = match spec {
        FamilySpec::Cross(e) => format!(
            "# family {spec}: cross-polytope with an added apex, dimension {}\n",
            2 * e + 1
        ),
        FamilySpec::Pm(m) => format!(
            "# family {spec}: two {m}-chains with one cross relation\n"
        ),
        FamilySpec::Qm(m) => format!(
            "# family {spec}: two {m}-chains with two cross relations\n"
        ),
    };
    let body = match spec {
        FamilySpec::Cross(_) => spec.polytope()?.to_text(),
        FamilySpec::Pm(_) | FamilySpec::Qm(_) => spec.poset()?.to_text(),
    };
    Ok(format!("{header}{body}"))
}

fn cmd_family(spec: &str, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let spec = FamilySpec::parse(spec)?;
    let content = family_file(spec)?;
    match path {
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        }
        None => {
            write!(out, "{content}").map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))?;
        }
    }
    Ok(())
}
