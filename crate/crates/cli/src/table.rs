//! Pointwise CSV for the three table families.

use std::fmt::Write as _;

use smms_core::adcore::{sample_grid, GridSpec, Interval};
use smms_core::catalog::{make, FamilySpec, FamilyTag};
use smms_core::conformal::{apply_with_cap, TransformedSmms};
use smms_core::geometry::{PointSpec, Sym2};
use smms_core::weighted::WeightedPoint;

use crate::config::parse_assignments;
use crate::error::{CliError, CliResult};

pub const COLUMNS: [&str; 7] = ["t", "phi", "v", "u", "residual_P", "residual_P_hat", "scale_residual"];

/// Which row of the table, by the sign of `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Row {
    Pos,
    Zero,
    Neg,
}

impl Row {
    fn default_lambda(self) -> f64 {
        match self {
            Row::Pos => 0.5,
            Row::Zero => 0.0,
            Row::Neg => -0.5,
        }
    }

    fn admits(self, lambda: f64) -> bool {
        match self {
            Row::Pos => lambda > 0.0,
            Row::Zero => lambda == 0.0,
            Row::Neg => lambda < 0.0,
        }
    }
}

/// CSV text plus the largest entry of each residual column.
pub struct Table {
    pub csv: String,
    pub max_residual: [f64; 3],
}

impl Table {
    pub fn ok(&self, tol: f64) -> bool {
        self.max_residual.iter().all(|r| *r < tol)
    }
}

fn schouten_residual(w: &WeightedPoint, lambda: f64) -> f64 {
    (w.schouten - Sym2::scalar(lambda)).max_abs()
}

pub fn table(row: Row, assignments: &[String], k: Option<usize>) -> CliResult<Table> {
    let mut params = parse_assignments(assignments)?;
    let lambda = *params.entry("lambda".into()).or_insert(row.default_lambda());
    if !row.admits(lambda) {
        return Err(CliError::Config(format!(
            "lambda = {lambda} does not belong to the {} row",
            format!("{row:?}").to_lowercase()
        )));
    }
    if row == Row::Zero && !params.contains_key("b") {
        // this row needs b = ac when κ ≠ 0
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        params.insert("b".into(), get("a", 1.0) * get("c", 1.0));
    }
    let b = make(&FamilySpec {
        tag: FamilyTag::TableRow,
        params,
    })?;
    let grid = GridSpec {
        k: k.unwrap_or(200),
        ..GridSpec::default()
    };
    let u = b.factor.as_ref().expect("table rows carry a paired factor");
    let lambda_hat = b.expected.lambda_hat.expect("table rows fix the transformed constant");
    let img = apply_with_cap(&b.smms, u, grid.cap)?;
    let (m, n) = (b.smms.params.m, b.smms.params.n as f64);

    let mut csv = COLUMNS.join(",");
    csv.push('\n');
    let mut worst = [0.0f64; 3];
    for p in common_grid(b.smms.metric.base(), &img, &grid)? {
        let w = b.smms.point(&p)?;
        let wh = img.smms.point(&img.map_point(&p)?)?;
        let scale = ((m + n) * lambda - w.j) * w.v / m;
        let res = [
            schouten_residual(&w, lambda),
            schouten_residual(&wh, lambda_hat),
            (scale - b.expected.kappa).abs(),
        ];
        for (a, r) in worst.iter_mut().zip(res) {
            *a = a.max(r);
        }
        let phi = b.smms.metric.phi.eval(p.t)?;
        let uu = u.u.eval(p.t)?;
        writeln!(csv, "{},{},{},{},{:e},{:e},{:e}", p.t, phi, w.v, uu, res[0], res[1], res[2])
            .expect("writing to a String");
    }
    Ok(Table {
        csv,
        max_residual: worst,
    })
}

/// `k` points of the original base whose images also lie in the sampled
/// part of the image base. Far out where `u` is large the image jets lose
/// about `u²ε` absolutely, and the image grid's margin already excludes that
/// region from verification.
fn common_grid(base: &Interval, img: &TransformedSmms, grid: &GridSpec) -> CliResult<Vec<PointSpec>> {
    let ends = |dom: &Interval| -> CliResult<(f64, f64)> {
        let e = sample_grid(dom, 2, grid.margin, grid.cap)?;
        Ok((e[0], e[1]))
    };
    let (lo, hi) = ends(base)?;
    let (ilo, ihi) = ends(img.smms.metric.base())?;
    let (plo, phi) = (img.map.inverse(ilo)?, img.map.inverse(ihi)?);
    let window = Interval::closed(lo.max(plo), hi.min(phi));
    if !(window.lo < window.hi) {
        return Err(CliError::Config("original and image sampling windows do not overlap".into()));
    }
    Ok(sample_grid(&window, grid.k, grid.margin, grid.cap)?.into_iter().map(PointSpec::t).collect())
}
