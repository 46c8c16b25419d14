//! Report assembly and rendering: the analysis report aggregating fan
//! predicates, class-group data, weights, symmetry orders, class-lattice
//! flags, and the canonical ω with its target shapes, plus JSON and
//! aligned-text renderings of classification reports. All output is
//! deterministic so repeated runs are byte-identical.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::autgroup::{
    class_aut_group, cox_algebra_shape, fan_automorphisms, weight_decomposition,
};
use crate::descent::{FormsReport, TorusLabel};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::glattice::{is_coflasque, is_flasque, InvertibilityVerdict};
use crate::omega::{
    canonical_omega, injectivity_verdict, target_shape, InjectivityReport, OmegaSet,
    SeparableAlgebraShape, TargetShape,
};
use crate::zmodule::{FGAbelianGroup, IntMatrix};

fn big_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    }
}

fn bigvec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big_json).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| big_json(m.get(i, j))).collect()))
            .collect(),
    )
}

fn bigvec_text(v: &[BigInt]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

/// Symmetry orders with the induced generators on the class group.
#[derive(Clone, Debug)]
pub struct SymmetrySection {
    pub w_order: usize,
    pub wo_order: usize,
    pub j_order: usize,
    pub j_generators: Vec<IntMatrix>,
}

/// Class-lattice predicates with the invertibility verdict.
#[derive(Clone, Debug)]
pub struct PicSection {
    pub flasque: bool,
    pub coflasque: bool,
    pub invertible: InjectivityReport,
}

/// Canonical ω together with the induced target data.
#[derive(Clone, Debug)]
pub struct OmegaSection {
    pub omega: OmegaSet,
    pub target: TargetShape,
    pub algebra: SeparableAlgebraShape,
}

/// Aggregated single-fan analysis. Sections that need unavailable
/// preconditions are `None`, with a note naming the reason.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub rank: usize,
    pub ray_count: usize,
    pub max_cone_count: usize,
    pub smooth: bool,
    pub complete: bool,
    pub projective: bool,
    pub cl_group: FGAbelianGroup,
    pub lambda: Vec<(Vec<BigInt>, usize)>,
    pub cox_algebra: Vec<usize>,
    pub symmetry: Option<SymmetrySection>,
    pub pic: Option<PicSection>,
    pub omega: Option<OmegaSection>,
    pub notes: Vec<String>,
}

/// Run the full analysis pipeline on one fan, degrading to a partial
/// report when smoothness, projectivity, or a free class group is
/// missing.
pub fn analysis_report(fan: &Fan) -> Result<AnalysisReport> {
    let validation = fan.validate();
    if !validation.is_valid() {
        return Err(Error::precondition(format!(
            "not a fan: {}",
            validation.violations.join("; ")
        )));
    }
    let div = fan.class_group()?;
    let smooth = fan.is_smooth();
    let complete = fan.is_complete();
    let projective = fan.is_projective();
    let wd = weight_decomposition(&div);
    let cox = cox_algebra_shape(&wd);
    let lambda: Vec<(Vec<BigInt>, usize)> = wd
        .classes
        .iter()
        .cloned()
        .zip(wd.multiplicities.iter().copied())
        .collect();

    let mut notes = Vec::new();
    let symmetry_data = match fan_automorphisms(fan) {
        Ok(w) => Some(w),
        Err(e) => {
            notes.push(format!("symmetry group unavailable: {}", e));
            None
        }
    };
    let mut symmetry = None;
    let mut pic = None;
    let mut omega = None;
    if let Some(w) = &symmetry_data {
        match class_aut_group(w, &div) {
            Ok(j) => {
                symmetry = Some(SymmetrySection {
                    w_order: w.order(),
                    wo_order: j.kernel_order(),
                    j_order: j.order(),
                    j_generators: j
                        .group()
                        .generator_indices()
                        .iter()
                        .map(|&g| j.group().element(g).clone())
                        .collect(),
                });
                let lattice = j.class_lattice();
                pic = Some(PicSection {
                    flasque: is_flasque(&lattice).holds,
                    coflasque: is_coflasque(&lattice).holds,
                    invertible: injectivity_verdict(&j),
                });
                if smooth && projective {
                    let set = canonical_omega(fan, &div, &j)?;
                    let (target, algebra) = target_shape(&set)?;
                    omega = Some(OmegaSection {
                        omega: set,
                        target,
                        algebra,
                    });
                } else {
                    notes.push(
                        "omega and target shapes unavailable: fan is not smooth and projective"
                            .to_string(),
                    );
                }
            }
            Err(e) => {
                notes.push(format!("class automorphisms unavailable: {}", e));
            }
        }
    }

    Ok(AnalysisReport {
        rank: fan.rank(),
        ray_count: fan.rays().len(),
        max_cone_count: fan.max_cones().len(),
        smooth,
        complete,
        projective,
        cl_group: div.cl_group().clone(),
        lambda,
        cox_algebra: cox.sizes(),
        symmetry,
        pic,
        omega,
        notes,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        let lambda: Vec<Value> = self
            .lambda
            .iter()
            .map(|(class, n)| json!({"class": bigvec_json(class), "n": n}))
            .collect();
        let symmetry = match &self.symmetry {
            Some(s) => json!({
                "W_order": s.w_order,
                "Wo_order": s.wo_order,
                "J_order": s.j_order,
                "J_generators": s.j_generators.iter().map(matrix_json).collect::<Vec<_>>(),
            }),
            None => Value::Null,
        };
        let pic = match &self.pic {
            Some(p) => json!({
                "flasque": p.flasque,
                "coflasque": p.coflasque,
                "invertible": matches!(p.invertible.verdict, InvertibilityVerdict::Proven { .. }),
                "verdict": p.invertible.message,
            }),
            None => Value::Null,
        };
        let omega = match &self.omega {
            Some(o) => json!({
                "classes": o.omega.classes.iter().map(|c| bigvec_json(c)).collect::<Vec<_>>(),
                "h0": o.omega.h0.iter().map(big_json).collect::<Vec<_>>(),
                "target_dimensions": o.target.factors.iter()
                    .map(|(_, d)| big_json(d)).collect::<Vec<_>>(),
                "separable_algebra": o.algebra.factors.iter()
                    .map(|(deg, orbit)| json!([big_json(deg), orbit])).collect::<Vec<_>>(),
            }),
            None => Value::Null,
        };
        json!({
            "fan": {
                "rank": self.rank,
                "rays": self.ray_count,
                "max_cones": self.max_cone_count,
            },
            "predicates": {
                "smooth": self.smooth,
                "complete": self.complete,
                "projective": self.projective,
            },
            "class_group": {
                "display": self.cl_group.to_string(),
                "invariant_factors": self.cl_group.invariant_factors.iter()
                    .map(big_json).collect::<Vec<_>>(),
            },
            "Lambda": lambda,
            "cox_algebra": self.cox_algebra,
            "W_order": self.symmetry.as_ref().map(|s| s.w_order),
            "Wo_order": self.symmetry.as_ref().map(|s| s.wo_order),
            "J_order": self.symmetry.as_ref().map(|s| s.j_order),
            "symmetry": symmetry,
            "pic": pic,
            "omega": omega,
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "fan: rank {}, {} rays, {} maximal cones\n",
            self.rank, self.ray_count, self.max_cone_count
        ));
        out.push_str(&format!(
            "predicates: smooth={} complete={} projective={}\n",
            self.smooth, self.complete, self.projective
        ));
        out.push_str(&format!("class group: {}\n", self.cl_group));
        out.push_str(&format!("weights: {} classes\n", self.lambda.len()));
        for (class, n) in &self.lambda {
            out.push_str(&format!("  {} n={}\n", bigvec_text(class), n));
        }
        let cox: Vec<String> = self.cox_algebra.iter().map(|n| format!("M{}", n)).collect();
        out.push_str(&format!("cox algebra: {}\n", cox.join(" x ")));
        match &self.symmetry {
            Some(s) => out.push_str(&format!(
                "symmetries: |W|={} |Wo|={} |J|={}\n",
                s.w_order, s.wo_order, s.j_order
            )),
            None => out.push_str("symmetries: unavailable\n"),
        }
        match &self.pic {
            Some(p) => {
                out.push_str(&format!(
                    "class lattice: flasque={} coflasque={}\n",
                    p.flasque, p.coflasque
                ));
                out.push_str(&format!("injectivity: {}\n", p.invertible.message));
            }
            None => out.push_str("class lattice: unavailable\n"),
        }
        match &self.omega {
            Some(o) => {
                out.push_str(&format!("omega: {} classes\n", o.omega.len()));
                for (class, h0) in o.omega.classes.iter().zip(o.omega.h0.iter()) {
                    out.push_str(&format!("  {} h0={}\n", bigvec_text(class), h0));
                }
                let dims: Vec<String> = o
                    .target
                    .factors
                    .iter()
                    .map(|(_, d)| format!("P{}", d))
                    .collect();
                out.push_str(&format!("target: {}\n", dims.join(" x ")));
                let algebra: Vec<String> = o
                    .algebra
                    .factors
                    .iter()
                    .map(|(deg, orbit)| format!("M{} over etale degree {}", deg, orbit))
                    .collect();
                out.push_str(&format!("separable algebra: {}\n", algebra.join(" x ")));
            }
            None => out.push_str("omega: unavailable\n"),
        }
        for note in &self.notes {
            out.push_str(&format!("note: {}\n", note));
        }
        out
    }
}

fn torus_text(t: &TorusLabel) -> String {
    let mut parts = Vec::new();
    if t.split > 0 {
        parts.push(if t.split == 1 {
            "Gm".to_string()
        } else {
            format!("Gm^{}", t.split)
        });
    }
    if t.circles > 0 {
        parts.push(if t.circles == 1 {
            "S1".to_string()
        } else {
            format!("S1^{}", t.circles)
        });
    }
    if t.restrictions > 0 {
        parts.push(if t.restrictions == 1 {
            "Res".to_string()
        } else {
            format!("Res^{}", t.restrictions)
        });
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" x ")
    }
}

/// JSON rendering of a classification report.
pub fn forms_to_json(report: &FormsReport) -> Value {
    let components: Vec<Value> = report
        .components
        .iter()
        .map(|c| {
            json!({
                "hom_images": c.hom_images,
                "group": c.group.to_string(),
                "size": c.size,
                "center_orbit_sizes": c.center_orbit_sizes,
                "canonical_torus": c.canonical_torus.iter()
                    .map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "w_class": r.w_class,
                "component": r.fingerprint.component,
                "torus": r.torus.map(|t| json!([t.split, t.circles, t.restrictions]))
                    .unwrap_or(Value::Null),
                "fingerprint": bigvec_json(&r.fingerprint.coords),
                "neutral": r.fingerprint.neutral,
                "variety_class": r.variety_class,
            })
        })
        .collect();
    json!({
        "model": report.model,
        "w_class_count": report.w_class_count,
        "torus_class_count": report.rows.len(),
        "variety_class_count": report.variety_class_count,
        "components": components,
        "rows": rows,
    })
}

/// Aligned-text rendering: a component table, then one row per torus
/// class with its fingerprint and variety class.
pub fn forms_to_text(report: &FormsReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("model: {}\n", report.model));
    out.push_str(&format!(
        "w-classes: {}  neutralization classes: {}  torus classes: {}  variety classes: {}\n",
        report.w_class_count,
        report.components.len(),
        report.rows.len(),
        report.variety_class_count
    ));

    out.push_str("\nneutralization classes:\n");
    let mut comp_rows: Vec<Vec<String>> = vec![vec![
        "component".to_string(),
        "group".to_string(),
        "size".to_string(),
        "center orbits".to_string(),
        "canonical torus".to_string(),
    ]];
    for (i, c) in report.components.iter().enumerate() {
        let orbits: Vec<String> = c.center_orbit_sizes.iter().map(|s| s.to_string()).collect();
        let torus: Vec<String> = c
            .canonical_torus
            .iter()
            .map(|(d, n)| {
                if *n == 1 {
                    format!("F{}", d)
                } else {
                    format!("F{}^{}", d, n)
                }
            })
            .collect();
        comp_rows.push(vec![
            i.to_string(),
            c.group.to_string(),
            c.size.to_string(),
            orbits.join("+"),
            torus.join(" x "),
        ]);
    }
    push_table(&mut out, &comp_rows);

    out.push_str("\ntorus classes:\n");
    let mut rows: Vec<Vec<String>> = vec![vec![
        "w-class".to_string(),
        "component".to_string(),
        "torus".to_string(),
        "fingerprint".to_string(),
        "neutral".to_string(),
        "variety".to_string(),
    ]];
    for r in &report.rows {
        let torus = match &r.torus {
            Some(t) => torus_text(t),
            None => "-".to_string(),
        };
        rows.push(vec![
            r.w_class.to_string(),
            r.fingerprint.component.to_string(),
            torus,
            bigvec_text(&r.fingerprint.coords),
            if r.fingerprint.neutral { "yes" } else { "no" }.to_string(),
            r.variety_class.to_string(),
        ]);
    }
    push_table(&mut out, &rows);
    out
}

fn push_table(out: &mut String, rows: &[Vec<String>]) {
    if rows.is_empty() {
        return;
    }
    let cols = rows[0].len();
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{:width$}", cell, width = widths[i]))
            .collect();
        out.push_str(&format!("  {}\n", line.join("  ").trim_end()));
    }
}
