//! Machine-readable run report and its human-readable renderings.

use serde::{Deserialize, Serialize};
use singpencil::classify::FiniteInfiniteReport;
use singpencil::nrank::{RankDiagnosis, RankVerdict};
use singpencil::solvers::{ClassifiedSpectrum, EigClass, Method};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EigenRow {
    pub re: f64,
    pub im: f64,
    pub infinite: bool,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gap: f64,
    pub class: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FiniteRow {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub load: f64,
    pub nrank: f64,
    pub solve: f64,
    pub classify: f64,
    pub total: f64,
}

/// One solve run, serialized losslessly; field names are part of the
/// interface.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub method: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub nrank_source: String,
    pub eigenvalues: Vec<EigenRow>,
    pub finite: Vec<FiniteRow>,
    pub diagnosis: String,
    pub timings_ms: Timings,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Project => "project",
        Method::ProjectPermutation => "project-perm",
        Method::Augment => "augment",
        Method::AugmentSimple => "augment-simple",
        Method::Perturb => "perturb",
    }
}

pub fn class_name(c: EigClass) -> &'static str {
    match c {
        EigClass::TrueRegular => "true",
        EigClass::RandomRight => "random_right",
        EigClass::RandomLeft => "random_left",
        EigClass::Prescribed => "prescribed",
    }
}

pub fn verdict_name(v: RankVerdict) -> &'static str {
    match v {
        RankVerdict::Consistent => "consistent",
        RankVerdict::LikelyUnderestimate => "likely_underestimate",
        RankVerdict::PossibleOverestimate => "possible_overestimate",
    }
}

pub fn build_report(
    spectrum: &ClassifiedSpectrum,
    fin: &FiniteInfiniteReport,
    diagnosis: &RankDiagnosis,
    n: usize,
    m: usize,
    nrank_source: &str,
    timings_ms: Timings,
) -> RunReport {
    let eigenvalues = spectrum
        .entries
        .iter()
        .map(|e| {
            // an exact infinity has no finite representative; re/im are then
            // zero by convention and the flag carries the information
            let (re, im) = if e.value.is_exactly_infinite() {
                (0.0, 0.0)
            } else {
                let l = e.value.lambda();
                (l.re, l.im)
            };
            EigenRow {
                re,
                im,
                infinite: e.value.is_numerically_infinite(),
                alpha: e.alpha,
                beta: e.beta,
                gamma: e.gamma,
                gap: e.gap,
                class: class_name(e.class).to_string(),
            }
        })
        .collect();
    let finite = fin
        .finite
        .iter()
        .map(|v| {
            let l = v.lambda();
            FiniteRow { re: l.re, im: l.im }
        })
        .collect();
    RunReport {
        method: method_name(spectrum.method).to_string(),
        n,
        m,
        k: spectrum.k,
        nrank_source: nrank_source.to_string(),
        eigenvalues,
        finite,
        diagnosis: verdict_name(diagnosis.verdict).to_string(),
        timings_ms,
    }
}

fn fmt_value(row: &EigenRow) -> String {
    if row.infinite && row.re == 0.0 && row.im == 0.0 {
        "inf".to_string()
    } else if row.im == 0.0 {
        format!("{:.7e}", row.re)
    } else {
        format!("{:.7e}{:+.7e}i", row.re, row.im)
    }
}

pub fn render_table(r: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "method {}  pencil {}x{}  k {}  nrank {} ({})\n",
        r.method,
        r.n,
        r.m,
        r.k,
        r.n.max(r.m) - r.k,
        r.nrank_source
    ));
    out.push_str(&format!(
        "{:>3}  {:>28}  {:>9}  {:>9}  {:>9}  {:>9}  {}\n",
        "j", "lambda", "gamma", "alpha", "beta", "gap", "class"
    ));
    for (j, e) in r.eigenvalues.iter().enumerate() {
        out.push_str(&format!(
            "{:>3}  {:>28}  {:>9.2e}  {:>9.2e}  {:>9.2e}  {:>9.2e}  {}\n",
            j + 1,
            fmt_value(e),
            e.gamma,
            e.alpha,
            e.beta,
            e.gap,
            e.class
        ));
    }
    out.push_str(&format!(
        "finite: [{}]\n",
        r.finite
            .iter()
            .map(|f| if f.im == 0.0 {
                format!("{:.7}", f.re)
            } else {
                format!("{:.7}{:+.7}i", f.re, f.im)
            })
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!("diagnosis: {}\n", r.diagnosis));
    out
}

pub fn render_csv(r: &RunReport) -> String {
    let mut out = String::from("j,re,im,infinite,alpha,beta,gamma,gap,class\n");
    for (j, e) in r.eigenvalues.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            j + 1,
            e.re,
            e.im,
            e.infinite,
            e.alpha,
            e.beta,
            e.gamma,
            e.gap,
            e.class
        ));
    }
    out
}
