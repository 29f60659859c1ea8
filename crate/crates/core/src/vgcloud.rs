//! The (G, φ) image of sampled points of M_G, with the φ = 0 limit layer, and
//! its CSV / PLY / gnuplot export.

use std::fmt::Write as _;
use std::path::Path;

use crate::asymset::{complex_point, ClusterSet};
use crate::error::Error;
use crate::numeric::numeric_rank;
use crate::polycore::PolyMap;
use crate::realify::{phi_value, realify_map, RhoSpec};
use crate::singloc::{jacobian, minor_system, sample_singular_locus, SamplerConfig};

/// `level` value of interior samples (no sphere constraint).
pub const INTERIOR_LEVEL: i64 = -1;
/// `level` value of limit-layer points.
pub const LIMIT_LEVEL: i64 = -2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Interior { sample: usize },
    Sphere { level: usize, sample: usize },
    Limit { cluster: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloudPoint {
    /// Re G_1, Im G_1, …, φ.
    pub coords: Vec<f64>,
    pub level: i64,
    /// G-value not near any stable cluster.
    pub divergent: bool,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VgCloud {
    pub m: usize,
    pub points: Vec<CloudPoint>,
    pub rho: RhoSpec,
    pub schedule: Vec<f64>,
    pub seed: u64,
    /// Samples dropped because the Jacobian of G lost rank there.
    pub dropped: usize,
    pub warnings: Vec<String>,
}

/// Rank threshold for the G-rows of the real Jacobian.
const RANK_TOL: f64 = 1e-8;

/// Interior samples from `sampler`, sphere samples and the limit layer from `asym`.
pub fn build_vg_cloud(g: &PolyMap, rho: &RhoSpec, sampler: &SamplerConfig, asym: Option<&ClusterSet>) -> Result<VgCloud, Error> {
    let real = realify_map(g, rho)?;
    let jac = jacobian(&real);
    let m = g.m();
    let interior = sample_singular_locus(&minor_system(&jac), sampler);
    let mut dropped = 0;
    let mut keep = |x: &[f64]| {
        let ok = numeric_rank(&jac.eval_map_rows(x), RANK_TOL) == 2 * m;
        if !ok {
            dropped += 1;
        }
        ok
    };
    let image = |x: &[f64]| -> Result<Vec<f64>, Error> {
        let mut v: Vec<f64> = g.evaluate(&complex_point(x))?.iter().flat_map(|c| [c.re, c.im]).collect();
        v.push(phi_value(rho, x));
        Ok(v)
    };
    let mut points = Vec::new();
    for (i, p) in interior.points.iter().enumerate() {
        if keep(&p.coords) {
            points.push(CloudPoint { coords: image(&p.coords)?, level: INTERIOR_LEVEL, divergent: false, provenance: Provenance::Interior { sample: i } });
        }
    }
    let mut schedule = Vec::new();
    if let Some(s) = asym {
        schedule = s.schedule();
        for (k, lvl) in s.levels.iter().enumerate() {
            for (i, p) in lvl.samples.iter().enumerate() {
                if !keep(&p.coords) {
                    continue;
                }
                let near = s.clusters.iter().any(|c| {
                    let d: f64 = c.center.iter().zip(&p.value).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                    let cn: f64 = c.center.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                    d <= s.cluster_rel * (1.0 + cn)
                });
                points.push(CloudPoint { coords: image(&p.coords)?, level: k as i64, divergent: !near, provenance: Provenance::Sphere { level: k, sample: i } });
            }
        }
        for (ci, c) in s.clusters.iter().enumerate() {
            let mut v: Vec<f64> = c.center.iter().flat_map(|z| [z.re, z.im]).collect();
            v.push(0.0);
            points.push(CloudPoint { coords: v, level: LIMIT_LEVEL, divergent: false, provenance: Provenance::Limit { cluster: ci } });
        }
    }
    let mut warnings = Vec::new();
    if points.is_empty() {
        warnings.push("no samples: the cloud is empty".to_string());
    }
    Ok(VgCloud { m, points, rho: rho.clone(), schedule, seed: sampler.seed, dropped, warnings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudFormat {
    Csv,
    Ply,
    PlotScript,
}

pub fn csv_header(m: usize) -> String {
    let mut cols: Vec<String> = (1..=m).flat_map(|i| [format!("g_re_{i}"), format!("g_im_{i}")]).collect();
    cols.push("phi".into());
    cols.push("level".into());
    cols.join(",")
}

pub fn to_csv(cloud: &VgCloud) -> String {
    let mut out = csv_header(cloud.m);
    out.push('\n');
    for p in &cloud.points {
        for v in &p.coords {
            let _ = write!(out, "{v:.16e},");
        }
        let _ = writeln!(out, "{}", p.level);
    }
    out
}

/// Rows `(coords, level)` of a CSV written by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<(Vec<f64>, i64)>, Error> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Config("empty CSV".into()))?;
    let ncols = header.split(',').count();
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != ncols {
                return Err(Error::Config(format!("expected {ncols} columns, got {}", fields.len())));
            }
            let bad = |f: &str| Error::Config(format!("bad CSV field {f:?}"));
            let coords = fields[..ncols - 1].iter().map(|f| f.parse::<f64>().map_err(|_| bad(f))).collect::<Result<_, _>>()?;
            let level = fields[ncols - 1].parse::<i64>().map_err(|_| bad(fields[ncols - 1]))?;
            Ok((coords, level))
        })
        .collect()
}

pub fn to_ply(cloud: &VgCloud) -> Result<String, Error> {
    if cloud.points.is_empty() {
        return Err(Error::Config("PLY export needs a non-empty cloud".into()));
    }
    let mut out = String::from("ply\nformat ascii 1.0\ncomment (G, phi) image of sampled M_G\n");
    let _ = writeln!(out, "element vertex {}", cloud.points.len());
    for name in csv_header(cloud.m).split(',').filter(|c| *c != "level") {
        let _ = writeln!(out, "property double {name}");
    }
    out.push_str("property int level\nproperty uchar divergent\nend_header\n");
    for p in &cloud.points {
        let coords: Vec<String> = p.coords.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{} {} {}", coords.join(" "), p.level, u8::from(p.divergent));
    }
    Ok(out)
}

/// gnuplot 3D scatter of (Re G_1, Im G_1, φ) read from `csv_name`.
pub fn plot_script(cloud: &VgCloud, csv_name: &str) -> String {
    let phi = 2 * cloud.m + 1;
    let level = phi + 1;
    format!(
        "# (Re G_1, Im G_1, phi) scatter, colored by level\n\
         set datafile separator ','\n\
         set key off\n\
         set xlabel 'Re G_1'\n\
         set ylabel 'Im G_1'\n\
         set zlabel 'phi'\n\
         set zrange [0:1]\n\
         set palette rgbformulae 33,13,10\n\
         splot '{csv_name}' every ::1 using 1:2:{phi}:{level} with points pointtype 7 pointsize 0.5 palette\n\
         pause -1\n"
    )
}

pub fn export_cloud(cloud: &VgCloud, format: CloudFormat, path: &Path) -> Result<(), Error> {
    let text = match format {
        CloudFormat::Csv => to_csv(cloud),
        CloudFormat::Ply => to_ply(cloud)?,
        CloudFormat::PlotScript => {
            let csv = path.with_extension("csv");
            let name = csv.file_name().and_then(|n| n.to_str()).unwrap_or("cloud.csv").to_string();
            plot_script(cloud, &name)
        }
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymset::{estimate_asymptotic_set, AsymConfig};
    use crate::polycore::parse_poly_map;

    fn broughton() -> PolyMap {
        parse_poly_map("z + z^2*w", &["z", "w"]).unwrap()
    }

    fn cloud_of(points: Vec<Vec<f64>>) -> VgCloud {
        VgCloud {
            m: 1,
            points: points
                .into_iter()
                .enumerate()
                .map(|(i, c)| CloudPoint { coords: c, level: i as i64, divergent: false, provenance: Provenance::Interior { sample: i } })
                .collect(),
            rho: RhoSpec::unit(2),
            schedule: vec![],
            seed: 0,
            dropped: 0,
            warnings: vec![],
        }
    }

    #[test]
    fn broughton_interior_cloud() {
        let g = broughton();
        let c = build_vg_cloud(&g, &RhoSpec::unit(2), &SamplerConfig { count: 30, seed: 3, ..Default::default() }, None).unwrap();
        assert!(!c.points.is_empty());
        assert!(c.points.iter().all(|p| p.coords.len() == 3 && p.coords[2] > 0.0 && p.coords[2] <= 1.0));
    }

    #[test]
    fn known_image() {
        // (z, w) = (1, 1/2): G = 3/2, φ = 1/(1 + 1.25)
        let rho = RhoSpec::unit(2);
        let x = [1.0, 0.0, 0.5, 0.0];
        let v = broughton().evaluate(&complex_point(&x)).unwrap();
        assert!((v[0].re - 1.5).abs() < 1e-15 && v[0].im == 0.0);
        assert!((phi_value(&rho, &x) - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(phi_value(&rho, &[0.0; 4]), 1.0);
    }

    #[test]
    fn limit_layer_and_phi_bounds() {
        let g = broughton();
        let rho = RhoSpec::unit(2);
        let s = estimate_asymptotic_set(&g, &rho, &AsymConfig { seed: 1, ..Default::default() }).unwrap();
        let c = build_vg_cloud(&g, &rho, &SamplerConfig { count: 20, seed: 1, ..Default::default() }, Some(&s)).unwrap();
        let limit: Vec<&CloudPoint> = c.points.iter().filter(|p| p.level == LIMIT_LEVEL).collect();
        assert!(!limit.is_empty());
        assert!(limit.iter().all(|p| p.coords[2] == 0.0));
        assert!(limit.iter().any(|p| p.coords[0].hypot(p.coords[1]) < 0.1));
        for p in c.points.iter().filter(|p| p.level >= 0) {
            let r = s.levels[p.level as usize].radius;
            assert!(p.coords[2] > 0.0 && p.coords[2] <= 1.0 / (1.0 + r * r * rho.min_weight()) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn csv_round_trip() {
        let c = cloud_of(vec![vec![0.1, -2.0 / 3.0, 1.0], vec![1e-300, 5e10, 0.25], vec![0.0, 0.0, std::f64::consts::PI / 4.0]]);
        let text = to_csv(&c);
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("g_re_1,g_im_1,phi,level\n"));
        let back = parse_csv(&text).unwrap();
        for (p, (coords, level)) in c.points.iter().zip(&back) {
            assert_eq!(&p.coords, coords);
            assert_eq!(p.level, *level);
        }
    }

    #[test]
    fn empty_exports() {
        let c = cloud_of(vec![]);
        assert_eq!(to_csv(&c), "g_re_1,g_im_1,phi,level\n");
        assert!(to_ply(&c).is_err());
    }

    #[test]
    fn ply_and_script() {
        let c = cloud_of(vec![vec![1.0, 2.0, 0.5]]);
        let ply = to_ply(&c).unwrap();
        assert!(ply.contains("element vertex 1\n") && ply.contains("property uchar divergent\n"));
        assert!(plot_script(&c, "cloud.csv").contains("using 1:2:3:4"));
    }

    #[test]
    fn unwritable_path() {
        let c = cloud_of(vec![]);
        assert!(matches!(export_cloud(&c, CloudFormat::Csv, Path::new("/nonexistent/dir/cloud.csv")), Err(Error::Io(_))));
    }
}
