//! Browser demo for the bergmod laboratory.
//!
//! Three interactive operations, each returning a JSON payload the static
//! page renders on canvases:
//!
//! * [`disc_geometry`] — the Moebius automorphism `phi_z` of the unit disc:
//!   image of a polar reference grid, pseudo-hyperbolic circles, and the
//!   hyperbolic-ball disc `D(z, r)` with its closed-form center and radius.
//! * [`linear_pair_curve`] — sampled kernel-span estimates of
//!   `|Q2 Q1 Q2 - Q3|` for two lines at angle `theta` against the closed
//!   form `cos^2(theta)`.
//! * [`boundary_pair_ladder`] — the tangential affine counterexample:
//!   witness distances and the `norm_121` ladder climbing toward 1.

use bergmod::angle::{closedness_verdict, module_angle_sampled, Closedness, DEFAULT_MARGIN};
use bergmod::ball::{ball_params, MoebiusMap, Point};
use bergmod::span::{build_span, sample_variety, SamplePlan};
use bergmod::variety::{tangential_pair_witness, AffineVariety, LinearVariety, Variety};
use bergmod::C64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const CUTOFF: f64 = 1e-10;

#[derive(Serialize)]
struct Disc {
    center: [f64; 2],
    radius: f64,
}

#[derive(Serialize)]
struct FlowPoint {
    from: [f64; 2],
    to: [f64; 2],
}

#[derive(Serialize)]
struct DiscGeometry {
    z: [f64; 2],
    s_r: f64,
    rho_ell: f64,
    volume: f64,
    ball: Disc,
    rho_circles: Vec<Disc>,
    flow: Vec<FlowPoint>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Geometry payload for the disc explorer; `z` must satisfy `|z| < 1`.
pub fn disc_geometry_json(z_re: f64, z_im: f64, r_hyp: f64) -> Result<String, String> {
    let z = Point::new(vec![c(z_re, z_im)]);
    let ball = ball_params(&z, r_hyp.clamp(0.05, 4.0)).map_err(|e| e.to_string())?;
    let map = MoebiusMap::new(z.clone()).map_err(|e| e.to_string())?;

    // pseudo-hyperbolic circles rho(z, .) = s are Euclidean discs
    let mut rho_circles = Vec::new();
    for s in [0.25f64, 0.5, 0.75, 0.9] {
        let b = ball_params(&z, s.atanh()).map_err(|e| e.to_string())?;
        rho_circles.push(Disc {
            center: [
                b.ellipsoid_center.coords()[0].re,
                b.ellipsoid_center.coords()[0].im,
            ],
            radius: b.axial_radius,
        });
    }

    // image of a polar reference grid under phi_z
    let mut flow = Vec::new();
    for ring in 1..=4 {
        let rad = ring as f64 * 0.22;
        for k in 0..24 {
            let th = k as f64 * std::f64::consts::TAU / 24.0;
            let w = Point::new(vec![C64::from_polar(rad, th)]);
            let img = map.apply(&w).map_err(|e| e.to_string())?;
            flow.push(FlowPoint {
                from: [w.coords()[0].re, w.coords()[0].im],
                to: [img.coords()[0].re, img.coords()[0].im],
            });
        }
    }

    let payload = DiscGeometry {
        z: [z_re, z_im],
        s_r: ball.s_r,
        rho_ell: ball.rho_ell,
        volume: ball.volume(),
        ball: Disc {
            center: [
                ball.ellipsoid_center.coords()[0].re,
                ball.ellipsoid_center.coords()[0].im,
            ],
            radius: ball.axial_radius,
        },
        rho_circles,
        flow,
    };
    serde_json::to_string(&payload).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CurvePoint {
    theta: f64,
    exact: f64,
    sampled: f64,
    rel_err: f64,
}

#[derive(Serialize)]
struct PairCurve {
    m: usize,
    rho_max: f64,
    points: Vec<CurvePoint>,
}

/// Sampled vs exact `norm_121` over a theta sweep of line pairs in `C^2`.
pub fn linear_pair_curve_json(
    m: usize,
    rho_max: f64,
    seed: u64,
    count: usize,
) -> Result<String, String> {
    let m = m.clamp(10, 250);
    let rho_max = rho_max.clamp(0.3, 0.995);
    let count = count.clamp(3, 40);
    let mut points = Vec::new();
    for i in 0..count {
        let theta = (i as f64 + 1.0) / (count as f64 + 1.0) * std::f64::consts::FRAC_PI_2;
        let v1 = LinearVariety::coordinate_plane(2, &[0]);
        let v2 = LinearVariety::span_of(2, &[vec![c(theta.cos(), 0.0), c(theta.sin(), 0.0)]])
            .map_err(|e| e.to_string())?;
        let p1 = sample_variety(
            &Variety::Linear(v1),
            &SamplePlan::stratified(m, rho_max, seed.wrapping_add(2 * i as u64)),
        )
        .map_err(|e| e.to_string())?;
        let p2 = sample_variety(
            &Variety::Linear(v2),
            &SamplePlan::stratified(m, rho_max, seed.wrapping_add(2 * i as u64 + 1)),
        )
        .map_err(|e| e.to_string())?;
        let s1 = build_span(&p1, CUTOFF).map_err(|e| e.to_string())?;
        let s2 = build_span(&p2, CUTOFF).map_err(|e| e.to_string())?;
        let origin = build_span(&[Point::origin(2)], CUTOFF).map_err(|e| e.to_string())?;
        let report = module_angle_sampled(&s1, &s2, Some(&origin), DEFAULT_MARGIN)
            .map_err(|e| e.to_string())?;
        let exact = theta.cos() * theta.cos();
        points.push(CurvePoint {
            theta,
            exact,
            sampled: report.norm_121,
            rel_err: if exact > 1e-12 {
                (report.norm_121 - exact).abs() / exact
            } else {
                0.0
            },
        });
    }
    serde_json::to_string(&PairCurve { m, rho_max, points }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LadderEntry {
    rho_max: f64,
    rho_witness: f64,
    tangential_ratio: f64,
    norm_121: f64,
}

#[derive(Serialize)]
struct Ladder {
    slope: [f64; 2],
    entries: Vec<LadderEntry>,
    verdict: String,
}

/// Witness trace and `norm_121` ladder for the tangential counterexample.
pub fn boundary_pair_ladder_json(
    slope_re: f64,
    slope_im: f64,
    m: usize,
    seed: u64,
) -> Result<String, String> {
    let slope = c(slope_re, slope_im);
    if slope.norm() < 1e-9 {
        return Err("slope 0 degenerates the pair onto one line".to_string());
    }
    let m = m.clamp(20, 160);
    let ladder = [0.9f64, 0.99, 0.999];
    let witness_rungs = [0.5f64, 0.7, 0.9, 0.97, 0.99, 0.997, 0.999];

    let m1 = LinearVariety::coordinate_plane(2, &[0]);
    let dir = LinearVariety::span_of(2, &[vec![c(1.0, 0.0), slope]]).map_err(|e| e.to_string())?;
    let m2 = AffineVariety::new(Point::from_re(&[1.0, 0.0]), dir).map_err(|e| e.to_string())?;

    let mut entries = Vec::new();
    let mut norms = Vec::new();
    for (i, &rho_max) in ladder.iter().enumerate() {
        let (_, image, rho_w) =
            tangential_pair_witness(slope, rho_max).map_err(|e| e.to_string())?;
        let mut pts1 = sample_variety(
            &Variety::Linear(m1.clone()),
            &SamplePlan::stratified(m, rho_max, seed.wrapping_add(2 * i as u64)),
        )
        .map_err(|e| e.to_string())?;
        let mut pts2 = sample_variety(
            &Variety::Affine(m2.clone()),
            &SamplePlan::stratified(m, rho_max, seed.wrapping_add(2 * i as u64 + 1)),
        )
        .map_err(|e| e.to_string())?;
        for &rw in witness_rungs.iter().filter(|&&rw| rw <= rho_max) {
            let (w_r, _, _) = tangential_pair_witness(slope, rw).map_err(|e| e.to_string())?;
            pts1.push(Point::from_re(&[rw, 0.0]));
            if w_r.is_interior() {
                pts2.push(w_r);
            }
        }
        let s1 = build_span(&pts1, CUTOFF).map_err(|e| e.to_string())?;
        let s2 = build_span(&pts2, CUTOFF).map_err(|e| e.to_string())?;
        let report =
            module_angle_sampled(&s1, &s2, None, DEFAULT_MARGIN).map_err(|e| e.to_string())?;
        norms.push(report.norm_121);
        entries.push(LadderEntry {
            rho_max,
            rho_witness: rho_w,
            tangential_ratio: image.coords()[1].norm() / (1.0 - rho_max * rho_max).sqrt(),
            norm_121: report.norm_121,
        });
    }
    let verdict = match closedness_verdict(&norms, DEFAULT_MARGIN) {
        Closedness::Closed => "closed",
        Closedness::NotClosed => "not-closed",
        Closedness::Inconclusive => "inconclusive",
    };
    serde_json::to_string(&Ladder {
        slope: [slope_re, slope_im],
        entries,
        verdict: verdict.to_string(),
    })
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn disc_geometry(z_re: f64, z_im: f64, r_hyp: f64) -> Result<String, JsValue> {
    disc_geometry_json(z_re, z_im, r_hyp).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn linear_pair_curve(
    m: usize,
    rho_max: f64,
    seed: u64,
    count: usize,
) -> Result<String, JsValue> {
    linear_pair_curve_json(m, rho_max, seed, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn boundary_pair_ladder(
    slope_re: f64,
    slope_im: f64,
    m: usize,
    seed: u64,
) -> Result<String, JsValue> {
    boundary_pair_ladder_json(slope_re, slope_im, m, seed).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_geometry_payload_is_consistent() {
        let json = disc_geometry_json(0.4, 0.2, 1.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        // ball disc stays inside the unit disc
        let cx = v["ball"]["center"][0].as_f64().unwrap();
        let cy = v["ball"]["center"][1].as_f64().unwrap();
        let r = v["ball"]["radius"].as_f64().unwrap();
        assert!((cx * cx + cy * cy).sqrt() + r <= 1.0 + 1e-12);
        // flow images stay inside the closed disc
        for p in v["flow"].as_array().unwrap() {
            let x = p["to"][0].as_f64().unwrap();
            let y = p["to"][1].as_f64().unwrap();
            assert!(x * x + y * y <= 1.0 + 1e-9);
        }
        assert!(disc_geometry_json(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn pair_curve_tracks_cos_squared() {
        let json = linear_pair_curve_json(60, 0.9, 3, 5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for p in v["points"].as_array().unwrap() {
            let rel = p["rel_err"].as_f64().unwrap();
            assert!(rel < 0.02, "curve point off: {p}");
        }
    }

    #[test]
    fn ladder_climbs_toward_one() {
        let json = boundary_pair_ladder_json(1.0, 0.0, 80, 5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let norms: Vec<f64> = v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["norm_121"].as_f64().unwrap())
            .collect();
        assert!(norms.windows(2).all(|w| w[1] > w[0]), "{norms:?}");
        assert!(*norms.last().unwrap() > 0.95);
        assert_eq!(v["verdict"].as_str().unwrap(), "not-closed");
        assert!(boundary_pair_ladder_json(0.0, 0.0, 80, 5).is_err());
    }
}
