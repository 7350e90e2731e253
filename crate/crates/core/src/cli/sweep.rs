//! One report row per family size, written as CSV.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::kn_asymptotic;
use crate::graph::{FamilyKind, FamilySpec};

use super::analysis::Analysis;
use super::report::Report;
use super::{AnalysisConfig, LogBase};

/// Column order of the sweep table.
pub const HEADER: [&str; 11] = [
    "n",
    "d",
    "r",
    "omega",
    "Omega",
    "deg_bound",
    "auto_bound",
    "combined",
    "exact_S",
    "asymptotic_S",
    "status",
];

/// Entropies and bounds are in the configured log base. `omega` is the
/// Burnside orbit count of Γ_A on part A and `Omega` the intertwiner rank cap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub d: Option<usize>,
    pub r: Option<usize>,
    pub omega: Option<u64>,
    #[serde(rename = "Omega")]
    pub omega_cap: Option<usize>,
    pub deg_bound: Option<f64>,
    pub auto_bound: Option<f64>,
    pub combined: Option<f64>,
    #[serde(rename = "exact_S")]
    pub exact_s: Option<f64>,
    #[serde(rename = "asymptotic_S")]
    pub asymptotic_s: Option<f64>,
    pub status: String,
}

impl SweepRow {
    pub fn from_report(rep: &Report, base: LogBase) -> SweepRow {
        let v = |x: f64| base.convert(x);
        let b = rep.bounds.as_ref();
        let status = match (&rep.unavailable.first(), b, &rep.schmidt) {
            (Some(u), _, _) => format!("partial: {} unavailable", u.section),
            (None, Some(b), Some(s)) if s.entropy_nats > b.combined_bound_nats + super::analysis::BOUND_SLACK => {
                "bound-violation".to_string()
            }
            _ => "ok".to_string(),
        };
        SweepRow {
            n: rep.graph.n,
            d: rep.ground.as_ref().map(|g| g.degeneracy),
            r: rep.ground.as_ref().map(|g| g.r),
            omega: b.and_then(|b| b.burnside_omega),
            omega_cap: b.map(|b| b.omega_cap),
            deg_bound: b.map(|b| v(b.degeneracy_bound_nats)),
            auto_bound: b.map(|b| v(b.automorphism_bound_nats)),
            combined: b.map(|b| v(b.combined_bound_nats)),
            exact_s: rep.schmidt.as_ref().map(|s| v(s.entropy_nats)),
            asymptotic_s: rep.reference.as_ref().and_then(|r| r.asymptotic_entropy_nats).map(v),
            status,
        }
    }

    fn failed(n: usize, err: &Error) -> SweepRow {
        SweepRow {
            n,
            d: None,
            r: None,
            omega: None,
            omega_cap: None,
            deg_bound: None,
            auto_bound: None,
            combined: None,
            exact_s: None,
            asymptotic_s: None,
            status: format!("error: {err}"),
        }
    }
}

/// Sizes `from, from + step, …, ≤ to` of a single-parameter family.
pub fn sweep(kind: FamilyKind, from: usize, to: usize, step: usize, cfg: &AnalysisConfig) -> Result<Vec<SweepRow>> {
    if kind == FamilyKind::CompleteBipartite {
        return Err(Error::InvalidFamily("sweeps take a single-parameter family".into()));
    }
    if step == 0 {
        return Err(Error::InvalidConfig("sweep step must be positive".into()));
    }
    cfg.validate()?;
    let mut rows = Vec::new();
    for n in (from..=to).step_by(step) {
        let row = FamilySpec::new(kind, vec![n])
            .and_then(|spec| {
                let graph = crate::graph::generate_family(&spec)?;
                let a = Analysis::run(graph, Some(&spec), cfg)?;
                let mut row = SweepRow::from_report(&Report::from_analysis(&a, &spec.to_string(), cfg), cfg.log_base);
                if kind == FamilyKind::Complete && row.asymptotic_s.is_none() && n >= 4 {
                    row.asymptotic_s = Some(cfg.log_base.convert(kn_asymptotic(n)));
                }
                Ok(row)
            })
            .unwrap_or_else(|e| SweepRow::failed(n, &e));
        rows.push(row);
    }
    Ok(rows)
}

/// CSV text with the fixed header, even for an empty table.
pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
}

/// Parses CSV produced by [`to_csv`].
pub fn from_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected sweep header {header:?}"),
        });
    }
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}
