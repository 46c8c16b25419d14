//! Command-line front end: analyze fans end to end, classify twisted
//! forms, inspect G-lattices, compute ω sets, nef cones, and section
//! counts, and emit the bundled example corpus.
//!
//! Exit codes: 0 on success, 1 for I/O or parse failures, 2 for
//! mathematical precondition failures.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

use toric_forms::autgroup::{class_aut_group, fan_automorphisms, weight_decomposition};
use toric_forms::descent::{
    canonical_torus_shape, classify_forms_finite, classify_forms_real, h2_set, twisted_center,
    GaloisModel,
};
use toric_forms::error::Error;
use toric_forms::fan::{bundled_fans, Fan, TDivisor};
use toric_forms::glattice::{
    coflasque_resolution, is_coflasque, is_flasque, is_invertible, tate_h, GLattice,
    InvertibilityVerdict,
};
use toric_forms::omega::{
    canonical_omega, classes_from_json_str, classes_to_json_value, injectivity_verdict,
    omega_from_classes, target_shape, validate_omega,
};
use toric_forms::polyhedral::{h0, nef_cone};
use toric_forms::report::{analysis_report, forms_to_json, forms_to_text};
use toric_forms::zmodule::IntMatrix;

use num_bigint::BigInt;

#[derive(Parser)]
#[command(
    name = "toric-forms",
    version,
    about = "exact analysis and form classification for split projective toric varieties"
)]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit aligned text (the default)
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on one fan: predicates, class group, weights,
    /// symmetries, class-lattice flags, canonical omega, target shapes
    Analyze {
        /// fan JSON file or bundled fan name
        fan: String,
    },
    /// Classify twisted forms over a field model
    Forms {
        /// fan JSON file or bundled fan name
        fan: String,
        /// real | finite[:order] | path to an abstract model JSON
        #[arg(long, default_value = "real")]
        field: String,
    },
    /// G-lattice computations
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Canonical omega of a fan, or validation of a provided class set
    Omega {
        /// fan JSON file or bundled fan name
        fan: String,
        /// omega JSON file ({"classes": [[...]]}) to validate
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Nef cone in class coordinates
    Nef {
        /// fan JSON file or bundled fan name
        fan: String,
    },
    /// Number of global sections of a torus-invariant divisor
    H0 {
        /// fan JSON file or bundled fan name
        fan: String,
        /// comma-separated coefficients, one per ray
        #[arg(long)]
        divisor: String,
    },
    /// Bundled example corpus
    Examples {
        #[command(subcommand)]
        cmd: ExamplesCmd,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Tate cohomology in degree -1, 0, or 1
    Cohomology {
        /// lattice JSON file or bundled lattice name
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i32,
        /// comma-separated element indices; defaults to the full group
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Vanishing of degree -1 cohomology over all subgroups
    Flasque { lattice: String },
    /// Vanishing of degree 1 cohomology over all subgroups
    Coflasque { lattice: String },
    /// Coflasque resolution 0 -> Q -> P -> M -> 0
    Resolve { lattice: String },
    /// Decide whether the lattice is a permutation-lattice summand
    Invertible { lattice: String },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// List the bundled fans, lattices, omega sets, and models
    List,
    /// Print one bundled example as JSON (or write it with --out)
    Emit {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn io(message: impl Into<String>) -> Self {
        CmdError {
            code: 1,
            message: message.into(),
        }
    }
    fn math(message: impl Into<String>) -> Self {
        CmdError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(m) => CmdError {
                code: 1,
                message: m,
            },
            Error::Precondition(m) | Error::Internal(m) => CmdError {
                code: 2,
                message: m,
            },
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::io(e.to_string())
    }
}

type CmdResult<T> = Result<T, CmdError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit(cli: &Cli, text: String, json: Value) {
    let payload = if cli.json {
        let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
        s.push('\n');
        s
    } else {
        text
    };
    // a closed pipe (e.g. piping into head) is not an error worth reporting
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_all(payload.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

fn run(cli: &Cli) -> CmdResult<()> {
    match &cli.command {
        Command::Analyze { fan } => {
            let fan = load_fan(fan)?;
            let report = analysis_report(&fan)?;
            emit(cli, report.to_text(), report.to_json());
        }
        Command::Forms { fan, field } => {
            let fan = load_fan(fan)?;
            let (text, json) = cmd_forms(&fan, field)?;
            emit(cli, text, json);
        }
        Command::Lattice { cmd } => {
            let (text, json) = cmd_lattice(cmd)?;
            emit(cli, text, json);
        }
        Command::Omega { fan, set } => {
            let fan = load_fan(fan)?;
            let (text, json) = cmd_omega(&fan, set.as_deref())?;
            emit(cli, text, json);
        }
        Command::Nef { fan } => {
            let fan = load_fan(fan)?;
            let (text, json) = cmd_nef(&fan)?;
            emit(cli, text, json);
        }
        Command::H0 { fan, divisor } => {
            let fan = load_fan(fan)?;
            let (text, json) = cmd_h0(&fan, divisor)?;
            emit(cli, text, json);
        }
        Command::Examples { cmd } => match cmd {
            ExamplesCmd::List => {
                let mut text = String::new();
                for (name, kind) in example_index() {
                    text.push_str(&format!("{} {}\n", name, kind));
                }
                let json = Value::Array(
                    example_index()
                        .into_iter()
                        .map(|(name, kind)| json!({"name": name, "kind": kind}))
                        .collect(),
                );
                emit(cli, text, json);
            }
            ExamplesCmd::Emit { name, out } => {
                let value = example_json(name)
                    .ok_or_else(|| CmdError::io(format!("unknown example: {}", name)))?;
                let rendered = serde_json::to_string_pretty(&value).expect("example serializes");
                match out {
                    Some(path) => std::fs::write(path, rendered + "\n")?,
                    None => println!("{}", rendered),
                }
            }
        },
    }
    Ok(())
}

fn load_fan(arg: &str) -> CmdResult<Fan> {
    let path = PathBuf::from(arg);
    if path.exists() {
        let text = std::fs::read_to_string(&path)?;
        return Ok(Fan::from_json_str(&text)?);
    }
    if let Some(fan) = toric_forms::fan::bundled_fan(arg) {
        return Ok(fan);
    }
    Err(CmdError::io(format!(
        "no such file or bundled fan: {}",
        arg
    )))
}

fn lattice_from_json_str(text: &str) -> Result<GLattice, Error> {
    let value: Value = serde_json::from_str(text)?;
    let rank = value
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::input("lattice JSON needs a rank"))? as usize;
    let gens_val = value
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::input("lattice JSON needs generators"))?;
    let mut gens = Vec::new();
    for g in gens_val {
        let rows = g
            .as_array()
            .ok_or_else(|| Error::input("generator must be a matrix"))?;
        let mut parsed: Vec<Vec<i64>> = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::input("matrix row must be an array"))?;
            let mut out = Vec::new();
            for x in row {
                out.push(
                    x.as_i64()
                        .ok_or_else(|| Error::input("matrix entries must be integers"))?,
                );
            }
            parsed.push(out);
        }
        gens.push(IntMatrix::from_rows(&parsed));
    }
    GLattice::from_generator_matrices(rank, &gens)
}

fn load_lattice(arg: &str) -> CmdResult<GLattice> {
    let path = PathBuf::from(arg);
    if path.exists() {
        let text = std::fs::read_to_string(&path)?;
        return Ok(lattice_from_json_str(&text)?);
    }
    if let Some(value) = example_json(arg) {
        return Ok(lattice_from_json_str(&value.to_string())?);
    }
    Err(CmdError::io(format!(
        "no such file or bundled lattice: {}",
        arg
    )))
}

fn bigvec_text(v: &[BigInt]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

fn bigvec_json(v: &[BigInt]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| json!(i64::try_from(x).unwrap_or(0)))
            .collect(),
    )
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| json!(i64::try_from(m.get(i, j)).unwrap_or(0)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn cmd_forms(fan: &Fan, field: &str) -> CmdResult<(String, Value)> {
    if field == "real" {
        let report = classify_forms_real(fan)?;
        return Ok((forms_to_text(&report), forms_to_json(&report)));
    }
    if field == "finite" || field.starts_with("finite:") {
        let order = match field.strip_prefix("finite:") {
            Some(rest) => rest
                .parse::<usize>()
                .map_err(|_| CmdError::io("finite model order must be an integer"))?,
            None => 2,
        };
        let report = classify_forms_finite(fan, order)?;
        return Ok((forms_to_text(&report), forms_to_json(&report)));
    }
    // abstract model from a file: report the H² component set
    let text = std::fs::read_to_string(field)
        .map_err(|e| CmdError::io(format!("cannot read model {}: {}", field, e)))?;
    let model = GaloisModel::from_json_str(&text)?;
    let div = fan.class_group()?;
    let w = fan_automorphisms(fan)?;
    let j = class_aut_group(&w, &div)?;
    let wd = weight_decomposition(&div);
    let h2 = h2_set(&model, &j.class_lattice(), &j)?;

    let mut out = String::new();
    out.push_str("model: abstract\n");
    out.push_str(&format!(
        "neutralization classes: {}\n",
        h2.components.len()
    ));
    let mut comps = Vec::new();
    for (i, comp) in h2.components.iter().enumerate() {
        let orbits = twisted_center(&comp.hom, &j, &wd)?;
        let torus = canonical_torus_shape(&comp.hom, &j, &wd)?;
        let orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        out.push_str(&format!(
            "component {}: group={} size={} center orbits={:?}\n",
            i,
            comp.group,
            comp.size(),
            orbit_sizes
        ));
        for e in &comp.elements {
            out.push_str(&format!(
                "  element {} period={} neutral={}\n",
                bigvec_text(e),
                comp.period(e),
                comp.group.is_zero_element(e)
            ));
        }
        comps.push(json!({
            "group": comp.group.to_string(),
            "size": comp.size(),
            "center_orbit_sizes": orbit_sizes,
            "canonical_torus": torus.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
            "elements": comp.elements.iter().map(|e| json!({
                "coords": bigvec_json(e),
                "period": i64::try_from(&comp.period(e)).unwrap_or(0),
                "neutral": comp.group.is_zero_element(e),
            })).collect::<Vec<_>>(),
        }));
    }
    let json = json!({
        "model": "abstract",
        "components": comps,
    });
    Ok((out, json))
}

fn parse_subgroup(l: &GLattice, spec: Option<&str>) -> CmdResult<Vec<usize>> {
    match spec {
        None => Ok((0..l.group().order()).collect()),
        Some(s) => {
            let mut out = Vec::new();
            for part in s.split(',') {
                let i: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| CmdError::io("subgroup must be element indices"))?;
                if i >= l.group().order() {
                    return Err(CmdError::math("subgroup index out of range"));
                }
                out.push(i);
            }
            let closure = l.group().closure_of(&out);
            Ok(closure)
        }
    }
}

fn cmd_lattice(cmd: &LatticeCmd) -> CmdResult<(String, Value)> {
    match cmd {
        LatticeCmd::Cohomology {
            lattice,
            degree,
            subgroup,
        } => {
            if !(-1..=1).contains(degree) {
                return Err(CmdError::math("degree must be -1, 0, or 1"));
            }
            let l = load_lattice(lattice)?;
            let h = parse_subgroup(&l, subgroup.as_deref())?;
            let group = tate_h(*degree, &h, &l);
            let text = format!("H^{}({} elements) = {}\n", degree, h.len(), group);
            let json = json!({
                "degree": degree,
                "subgroup_order": h.len(),
                "group": group.to_string(),
            });
            Ok((text, json))
        }
        LatticeCmd::Flasque { lattice } => {
            let l = load_lattice(lattice)?;
            let pred = is_flasque(&l);
            predicate_output("flasque", &pred.holds, &pred.witness)
        }
        LatticeCmd::Coflasque { lattice } => {
            let l = load_lattice(lattice)?;
            let pred = is_coflasque(&l);
            predicate_output("coflasque", &pred.holds, &pred.witness)
        }
        LatticeCmd::Resolve { lattice } => {
            let l = load_lattice(lattice)?;
            let res = coflasque_resolution(&l);
            let q_rank = res.p.rank() - l.rank();
            let mut text = format!(
                "resolution 0 -> Q -> P -> M -> 0 with rank P = {}, rank Q = {}\n",
                res.p.rank(),
                q_rank
            );
            let mut blocks = Vec::new();
            for b in &res.blocks {
                text.push_str(&format!(
                    "block: subgroup order {} with {} cosets over generator {}\n",
                    b.subgroup.len(),
                    b.coset_reps.len(),
                    bigvec_text(&b.generator)
                ));
                blocks.push(json!({
                    "subgroup_order": b.subgroup.len(),
                    "cosets": b.coset_reps.len(),
                    "generator": bigvec_json(&b.generator),
                }));
            }
            let json = json!({
                "p_rank": res.p.rank(),
                "q_rank": q_rank,
                "blocks": blocks,
                "projection": matrix_json(&res.pi),
            });
            Ok((text, json))
        }
        LatticeCmd::Invertible { lattice } => {
            let l = load_lattice(lattice)?;
            match is_invertible(&l) {
                InvertibilityVerdict::Proven { section } => {
                    let text = "invertible: proven with a verified section\n".to_string();
                    let json = json!({
                        "invertible": true,
                        "section": matrix_json(&section),
                    });
                    Ok((text, json))
                }
                InvertibilityVerdict::Disproven { reason } => {
                    let text = format!("invertible: disproven ({})\n", reason);
                    let json = json!({"invertible": false, "reason": reason});
                    Ok((text, json))
                }
            }
        }
    }
}

fn predicate_output(
    name: &str,
    holds: &bool,
    witness: &Option<Vec<usize>>,
) -> CmdResult<(String, Value)> {
    let mut text = format!("{}: {}\n", name, holds);
    if let Some(w) = witness {
        text.push_str(&format!("failing subgroup (element indices): {:?}\n", w));
    }
    let json = json!({
        name: holds,
        "witness_subgroup": witness,
    });
    Ok((text, json))
}

fn cmd_omega(fan: &Fan, set: Option<&std::path::Path>) -> CmdResult<(String, Value)> {
    let div = fan.class_group()?;
    let w = fan_automorphisms(fan)?;
    let j = class_aut_group(&w, &div)?;
    match set {
        None => {
            let omega = canonical_omega(fan, &div, &j)?;
            let (target, algebra) = target_shape(&omega)?;
            let verdict = injectivity_verdict(&j);
            let mut text = format!("omega: {} classes\n", omega.len());
            for (class, h0) in omega.classes.iter().zip(omega.h0.iter()) {
                text.push_str(&format!("  {} h0={}\n", bigvec_text(class), h0));
            }
            let orbits = omega.orbits();
            text.push_str(&format!(
                "orbits under class symmetries: {}\n",
                orbits.len()
            ));
            let dims: Vec<String> = target
                .factors
                .iter()
                .map(|(_, d)| format!("P{}", d))
                .collect();
            text.push_str(&format!("target: {}\n", dims.join(" x ")));
            let alg: Vec<String> = algebra
                .factors
                .iter()
                .map(|(deg, orbit)| format!("M{} over etale degree {}", deg, orbit))
                .collect();
            text.push_str(&format!("separable algebra: {}\n", alg.join(" x ")));
            text.push_str(&format!("injectivity: {}\n", verdict.message));
            let json = json!({
                "classes": classes_to_json_value(&omega.classes)?,
                "h0": omega.h0.iter().map(|x| json!(i64::try_from(x).unwrap_or(0))).collect::<Vec<_>>(),
                "orbits": orbits,
                "target_dimensions": target.factors.iter()
                    .map(|(_, d)| json!(i64::try_from(d).unwrap_or(0))).collect::<Vec<_>>(),
                "separable_algebra": algebra.factors.iter()
                    .map(|(deg, orbit)| json!([i64::try_from(deg).unwrap_or(0), orbit]))
                    .collect::<Vec<_>>(),
                "injectivity": verdict.message,
            });
            Ok((text, json))
        }
        Some(path) => {
            let content = std::fs::read_to_string(path)?;
            let classes = classes_from_json_str(&content)?;
            let validation = validate_omega(&classes, fan, &div, &j)?;
            let mut text = String::new();
            text.push_str(&format!("j_stable: {}\n", validation.j_stable));
            text.push_str(&format!(
                "all_globally_generated: {}\n",
                validation.all_globally_generated
            ));
            text.push_str(&format!("faithful: {}\n", validation.faithful));
            text.push_str(&format!(
                "generates_class_group: {}\n",
                validation.generates_class_group
            ));
            text.push_str(&format!(
                "kernel_coflasque: {}\n",
                validation.kernel_coflasque
            ));
            let fixed_ok = validation.fixed_surjective.iter().all(|(_, ok)| *ok);
            text.push_str(&format!("fixed_points_surjective: {}\n", fixed_ok));
            let mut json_map = json!({
                "j_stable": validation.j_stable,
                "all_globally_generated": validation.all_globally_generated,
                "faithful": validation.faithful,
                "generates_class_group": validation.generates_class_group,
                "kernel_coflasque": validation.kernel_coflasque,
                "fixed_points_surjective": fixed_ok,
            });
            if validation.all_pass() {
                let omega = omega_from_classes(&classes, fan, &div, &j)?;
                let (target, algebra) = target_shape(&omega)?;
                let dims: Vec<String> = target
                    .factors
                    .iter()
                    .map(|(_, d)| format!("P{}", d))
                    .collect();
                text.push_str(&format!("target: {}\n", dims.join(" x ")));
                let alg: Vec<String> = algebra
                    .factors
                    .iter()
                    .map(|(deg, orbit)| format!("M{} over etale degree {}", deg, orbit))
                    .collect();
                text.push_str(&format!("separable algebra: {}\n", alg.join(" x ")));
                json_map["target_dimensions"] = Value::Array(
                    target
                        .factors
                        .iter()
                        .map(|(_, d)| json!(i64::try_from(d).unwrap_or(0)))
                        .collect(),
                );
                json_map["separable_algebra"] = Value::Array(
                    algebra
                        .factors
                        .iter()
                        .map(|(deg, orbit)| json!([i64::try_from(deg).unwrap_or(0), orbit]))
                        .collect(),
                );
            } else {
                text.push_str("validation failed; target shapes not computed\n");
            }
            Ok((text, json_map))
        }
    }
}

fn cmd_nef(fan: &Fan) -> CmdResult<(String, Value)> {
    let div = fan.class_group()?;
    let nef = nef_cone(fan, &div)?;
    let rays = nef.cone.extreme_rays();
    let ineqs = nef.cone.inequalities();
    let mut text = String::new();
    text.push_str(&format!(
        "nef cone in class coordinates: {} extreme rays, {} facets\n",
        rays.len(),
        ineqs.len()
    ));
    for r in rays {
        text.push_str(&format!("  ray {}\n", bigvec_text(r)));
    }
    for i in ineqs {
        text.push_str(&format!("  facet {}\n", bigvec_text(i)));
    }
    let json = json!({
        "extreme_rays": rays.iter().map(|r| bigvec_json(r)).collect::<Vec<_>>(),
        "facets": ineqs.iter().map(|i| bigvec_json(i)).collect::<Vec<_>>(),
        "section": matrix_json(&nef.section),
    });
    Ok((text, json))
}

fn cmd_h0(fan: &Fan, divisor: &str) -> CmdResult<(String, Value)> {
    let mut coeffs = Vec::new();
    for part in divisor.split(',') {
        let x: i64 = part
            .trim()
            .parse()
            .map_err(|_| CmdError::io("divisor coefficients must be integers"))?;
        coeffs.push(x);
    }
    if coeffs.len() != fan.rays().len() {
        return Err(CmdError::math(format!(
            "expected {} coefficients, got {}",
            fan.rays().len(),
            coeffs.len()
        )));
    }
    let d = TDivisor::from_i64(&coeffs);
    let count = h0(fan, &d)?;
    let text = format!("h0 = {}\n", count);
    let json = json!({"h0": i64::try_from(&count).unwrap_or(0)});
    Ok((text, json))
}

fn example_index() -> Vec<(String, &'static str)> {
    let mut out: Vec<(String, &'static str)> = bundled_fans()
        .into_iter()
        .map(|(name, _)| (name, "fan"))
        .collect();
    out.push(("sign_lattice".to_string(), "lattice"));
    out.push(("regular_c2_lattice".to_string(), "lattice"));
    out.push(("nonsplit_rank3_lattice".to_string(), "lattice"));
    out.push(("dp6_pic_lattice".to_string(), "lattice"));
    out.push(("dp6_five_classes".to_string(), "omega"));
    out.push(("c2_model".to_string(), "model"));
    out
}

fn example_json(name: &str) -> Option<Value> {
    if let Some(fan) = toric_forms::fan::bundled_fan(name) {
        return Some(fan.to_json_value());
    }
    match name {
        "sign_lattice" => Some(json!({"rank": 1, "generators": [[[-1]]]})),
        "regular_c2_lattice" => Some(json!({"rank": 2, "generators": [[[0, 1], [1, 0]]]})),
        "nonsplit_rank3_lattice" => Some(json!({
            "rank": 3,
            "generators": [[[-1, 0, 0], [0, 0, 1], [0, 1, 0]]]
        })),
        "dp6_pic_lattice" => {
            let fan = toric_forms::fan::del_pezzo6();
            let div = fan.class_group().ok()?;
            let w = fan_automorphisms(&fan).ok()?;
            let j = class_aut_group(&w, &div).ok()?;
            let gens: Vec<Value> = j
                .group()
                .generator_indices()
                .iter()
                .map(|&g| matrix_json(j.group().element(g)))
                .collect();
            Some(json!({"rank": 4, "generators": gens}))
        }
        "dp6_five_classes" => Some(json!({
            "classes": [
                [2, 1, 1, -1],
                [1, 1, 1, 0],
                [1, 0, 1, 0],
                [1, 1, 0, 0],
                [1, 1, 1, -1]
            ]
        })),
        "c2_model" => Some(json!({
            "group": {"rank": 2, "generators": [[[0, 1], [1, 0]]]},
            "brauer": {"0": [], "1": [2]}
        })),
        _ => None,
    }
}
