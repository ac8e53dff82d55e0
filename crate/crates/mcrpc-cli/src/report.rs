//! Report structures shared by the text and `--json` output modes.

use serde::Serialize;

use mcrpc::{format_rational, rational_to_f64, Instance, Rational, RouteSide};

#[derive(Serialize)]
pub struct SolveReport {
    pub algo: String,
    pub n: u32,
    pub demands: usize,
    pub value: String,
    pub value_approx: f64,
    pub sides: String,
    pub collisions: usize,
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<LpReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fpt: Option<FptReport>,
}

#[derive(Serialize)]
pub struct LpReport {
    pub opt_f: String,
    pub opt_f_approx: f64,
    pub support: Vec<String>,
    pub support_weight: String,
    pub bound: String,
    pub cuts: usize,
    pub lp_solves: usize,
    pub pivots: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_dump: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct FptReport {
    pub k: usize,
    pub evaluated: u64,
    pub work_budget: u64,
}

impl SolveReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algo: {}\n", self.algo));
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("demands: {}\n", self.demands));
        out.push_str(&format!("value: {}\n", self.value));
        out.push_str(&format!("value~: {:.4}\n", self.value_approx));
        out.push_str(&format!("sides: {}\n", self.sides));
        out.push_str(&format!("collisions: {}\n", self.collisions));
        out.push_str(&format!("witness: {}\n", self.witness.join(" ")));
        if let Some(lp) = &self.lp {
            out.push_str(&format!("opt_f: {}\n", lp.opt_f));
            out.push_str(&format!("opt_f~: {:.4}\n", lp.opt_f_approx));
            out.push_str(&format!("support: {}\n", lp.support.join(" ")));
            out.push_str(&format!("support_weight: {}\n", lp.support_weight));
            out.push_str(&format!("bound: {}\n", lp.bound));
            out.push_str(&format!("cuts: {}\n", lp.cuts));
            out.push_str(&format!("lp_solves: {}\n", lp.lp_solves));
            out.push_str(&format!("pivots: {}\n", lp.pivots));
            if let Some(dump) = &lp.cut_dump {
                for line in dump {
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
        if let Some(fpt) = &self.fpt {
            out.push_str(&format!("k: {}\n", fpt.k));
            out.push_str(&format!("evaluated: {}\n", fpt.evaluated));
            out.push_str(&format!("work_budget: {}\n", fpt.work_budget));
        }
        out
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub sides: String,
    pub claimed: String,
    pub recomputed: String,
    pub collisions: usize,
    pub matches: bool,
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        format!(
            "sides: {}\nclaimed: {}\nrecomputed: {}\ncollisions: {}\nmatch: {}\n",
            self.sides, self.claimed, self.recomputed, self.collisions, self.matches
        )
    }
}

pub fn demand_label(instance: &Instance, p: usize) -> String {
    let d = &instance.demands()[p];
    format!("({},{})", d.origin(), d.destination())
}

pub fn route_member_label(instance: &Instance, p: usize, side: RouteSide) -> String {
    format!("{}{}", demand_label(instance, p), side)
}

pub fn rational_field(value: &Rational) -> (String, f64) {
    (format_rational(value), rational_to_f64(value))
}
