//! Riemannian illumination: direct lighting, hemisphere sampling and the
//! Monte Carlo indirect term.
//!
//! Shading evaluates the Phong-style local model with the tangent-space
//! metric in place of the Euclidean dot product. The indirect term samples
//! one cosine-weighted direction per bounce and recurses, with variance
//! handled by per-pixel sample accumulation. Light falls off with occlusion
//! only; radiance is constant along geodesics in a vacuum.

use crate::camera::offset_point;
use crate::color::Rgb;
use crate::geometry::{reflect_tangent, tangent_basis, TangentVec};
use crate::real::eps_step;
use crate::scene::{Material, Scene};
use crate::tracer::{light_connection, occluded, trace_ray, HitRecord};
use crate::{Point, Scalar, Tangent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sampling knobs of a render.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSettings {
    /// Samples accumulated per pixel.
    pub spp: u32,
    /// Indirect bounce depth; 0 is direct lighting only.
    pub max_bounces: i32,
    /// Fundamental-domain crossings allowed per traced ray.
    pub max_transport_level: u32,
    pub seed: u64,
    pub indirect_enabled: bool,
}

impl Default for RenderSettings {
    fn default() -> Self {
        Self {
            spp: 16,
            max_bounces: 5,
            max_transport_level: 8,
            seed: 0,
            indirect_enabled: true,
        }
    }
}

/// A sampled hemisphere direction with its probability density.
#[derive(Debug, Clone, Copy)]
pub struct HemisphereSample {
    pub w: Tangent,
    pub pdf: Scalar,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic per-sample generator keyed by (seed, pixel, sample).
///
/// Within a stream the draw order is fixed: pixel jitter u, v, then two
/// uniforms per bounce, so results are identical however pixels are
/// scheduled across workers.
pub fn sample_rng(seed: u64, pixel_index: u64, sample_index: u64) -> ChaCha8Rng {
    let mut state = seed ^ 0x5bf0_3635_16f5_e0c7;
    let a = splitmix64(&mut state);
    state ^= pixel_index;
    let b = splitmix64(&mut state);
    state ^= sample_index;
    let c = splitmix64(&mut state);
    let d = splitmix64(&mut state);
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&a.to_le_bytes());
    key[8..16].copy_from_slice(&b.to_le_bytes());
    key[16..24].copy_from_slice(&c.to_le_bytes());
    key[24..32].copy_from_slice(&d.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Cosine-weighted sample of the hemisphere around the unit normal:
/// d_w(w) = g(w, N) / pi, built in an orthonormal tangent frame.
pub fn sample_hemisphere(normal: &Tangent, rng: &mut impl Rng) -> HemisphereSample {
    let (u1, u2): (Scalar, Scalar) = (rng.gen(), rng.gen());
    let (a, b) = tangent_basis(normal);
    let r = u1.sqrt();
    let phi = 2.0 * std::f64::consts::PI * u2;
    let cos_theta = (1.0 - u1).sqrt();
    let v = a.v.scale(r * phi.cos()) + b.v.scale(r * phi.sin()) + normal.v.scale(cos_theta);
    let w = TangentVec::new(normal.base, v).reproject_unit();
    HemisphereSample {
        w,
        pdf: cos_theta.max(1e-12) / std::f64::consts::PI,
    }
}

/// Phong-style BRDF implied by the local model, normalized so each lobe
/// integrates to its coefficient:
/// f_r(v, w) = kd/pi + ks (ke+2)/(2 pi) g(reflect(w, N), v)^ke.
pub fn brdf(material: &Material, normal: &Tangent, view: &Tangent, w: &Tangent) -> Rgb {
    let diffuse = material.kd * std::f64::consts::FRAC_1_PI;
    let ks = material.ks;
    if ks.max_channel() <= 0.0 {
        return diffuse;
    }
    let wr = reflect_tangent(w, normal);
    let lobe = wr.metric(view).clamp(0.0, 1.0).powf(material.ke);
    let norm = (material.ke + 2.0) / (2.0 * std::f64::consts::PI);
    diffuse + ks * (norm * lobe)
}

/// Direct illumination at a hit: ambient term plus per-light diffuse and
/// specular contributions with both metric terms clamped to [0, 1] and each
/// light gated by its occlusion factor. No distance falloff.
pub fn direct_illumination(scene: &Scene, hit: &HitRecord, view: &Tangent) -> Rgb {
    direct_with_ambient(scene, hit, view, true)
}

pub(crate) fn direct_with_ambient(
    scene: &Scene,
    hit: &HitRecord,
    view: &Tangent,
    with_ambient: bool,
) -> Rgb {
    let material = &scene.objects[hit.object].material;
    let mut total = if with_ambient {
        material.ka * scene.ambient
    } else {
        Rgb::BLACK
    };
    if scene.lights.is_empty()
        || (material.kd.max_channel() <= 0.0 && material.ks.max_channel() <= 0.0)
    {
        return total;
    }
    let shadow_origin = offset_point(&hit.point, &hit.normal, eps_step::<Scalar>());
    for light in &scene.lights {
        let Some((w_i, _)) = light_connection(scene, &hit.point, &light.position) else {
            continue;
        };
        let diffuse = w_i.metric(&hit.normal).clamp(0.0, 1.0);
        let w_r = reflect_tangent(&w_i, &hit.normal);
        let specular = w_r.metric(view).clamp(0.0, 1.0).powf(material.ke);
        if diffuse <= 0.0 && specular <= 0.0 {
            continue;
        }
        if occluded(
            scene,
            &shadow_origin,
            &light.position,
            default_shadow_maxlevel(scene),
        ) {
            continue;
        }
        total += material.kd * light.intensity * diffuse;
        total += material.ks * light.intensity * specular;
    }
    total
}

/// Shadow rays may wrap across up to one domain copy per axis.
fn default_shadow_maxlevel(scene: &Scene) -> u32 {
    if scene.manifold.faces.is_empty() {
        0
    } else {
        4
    }
}

/// Radiance arriving at `p` from direction `dir`: traces the geodesic and
/// shades the hit, recursing through one sampled bounce per depth level.
/// Negative depth contributes nothing; a miss is black.
pub fn indirect_illumination(
    scene: &Scene,
    p: &Point,
    dir: &Tangent,
    depth: i32,
    maxlevel: u32,
    rng: &mut impl Rng,
) -> Rgb {
    incoming_radiance(scene, p, dir, depth, maxlevel, false, rng)
}

fn incoming_radiance(
    scene: &Scene,
    p: &Point,
    dir: &Tangent,
    depth: i32,
    maxlevel: u32,
    with_ambient: bool,
    rng: &mut impl Rng,
) -> Rgb {
    if depth < 0 {
        return Rgb::BLACK;
    }
    let Some(hit) = trace_ray(scene, p, dir, maxlevel) else {
        return Rgb::BLACK;
    };
    shade_hit(scene, &hit, depth, maxlevel, with_ambient, rng)
}

fn shade_hit(
    scene: &Scene,
    hit: &HitRecord,
    depth: i32,
    maxlevel: u32,
    with_ambient: bool,
    rng: &mut impl Rng,
) -> Rgb {
    let material = &scene.objects[hit.object].material;
    let view = TangentVec::new(hit.point, -hit.tangent.v);
    let mut color = material.emission + direct_with_ambient(scene, hit, &view, with_ambient);
    if depth >= 1 {
        let sample = sample_hemisphere(&hit.normal, rng);
        let bounce_origin = offset_point(&hit.point, &hit.normal, eps_step::<Scalar>());
        let bounce_dir = sample.w.rebased_at(bounce_origin);
        let incoming = incoming_radiance(
            scene,
            &bounce_origin,
            &bounce_dir,
            depth - 1,
            maxlevel,
            with_ambient,
            rng,
        );
        let cos = sample.w.metric(&hit.normal).clamp(0.0, 1.0);
        color += brdf(material, &hit.normal, &view, &sample.w) * incoming * (cos / sample.pdf);
    }
    color
}

/// Full radiance along a camera ray: emission plus direct plus (when
/// enabled) the Monte Carlo indirect term. The ambient approximation is
/// only applied when the true indirect term is disabled.
pub fn radiance(
    scene: &Scene,
    p: &Point,
    dir: &Tangent,
    settings: &RenderSettings,
    rng: &mut impl Rng,
) -> Rgb {
    let depth = if settings.indirect_enabled {
        settings.max_bounces
    } else {
        0
    };
    incoming_radiance(
        scene,
        p,
        dir,
        depth,
        settings.max_transport_level,
        !settings.indirect_enabled,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ModelPoint;
    use crate::scene::parse_scene;
    use crate::vec4::Vec4;

    fn floor_scene(extra_objects: &str, lights: &str, ambient: [f64; 3]) -> Scene {
        parse_scene(&format!(
            r#"{{
                "manifold": "euclidean_box",
                "ambient": [{}, {}, {}],
                "camera": {{"origin": [0, 0.5, -2], "look_at": [0, 0, 0], "vfov_deg": 60}},
                "lights": [{lights}],
                "objects": [
                    {{"type": "quad", "id": "floor", "origin": [-2, 0, -2],
                      "edge_u": [4, 0, 0], "edge_v": [0, 0, 4],
                      "material": {{"kd": [1, 1, 1], "ke": 1}}}}{extra_objects}
                ]
            }}"#,
            ambient[0], ambient[1], ambient[2]
        ))
        .unwrap()
    }

    fn hit_floor(scene: &Scene) -> (HitRecord, Tangent) {
        let p = ModelPoint::euclidean(0.0, 1.0, 0.0);
        let dir = TangentVec::euclidean_dir(p, 0.0, -1.0, 0.0);
        let hit = trace_ray(scene, &p, &dir, 0).expect("floor below");
        let view = TangentVec::new(hit.point, -hit.tangent.v);
        (hit, view)
    }

    #[test]
    fn ambient_only_material_returns_ambient() {
        let scene = parse_scene(
            r#"{
                "manifold": "euclidean_box",
                "ambient": [0.3, 0.5, 0.7],
                "camera": {"origin": [0, 0.5, -2], "look_at": [0, 0, 0], "vfov_deg": 60},
                "lights": [],
                "objects": [{"type": "quad", "id": "floor", "origin": [-2, 0, -2],
                             "edge_u": [4, 0, 0], "edge_v": [0, 0, 4],
                             "material": {"ka": [1, 1, 1], "ke": 1}}]
            }"#,
        )
        .unwrap();
        let (hit, view) = hit_floor(&scene);
        let c = direct_illumination(&scene, &hit, &view);
        assert_eq!(c, Rgb::new(0.3, 0.5, 0.7));
    }

    #[test]
    fn normal_incidence_light_gives_intensity() {
        // Light straight above the hit: w_i = N, kd = 1, no ambient.
        let scene = floor_scene(
            "",
            r#"{"position": [0, 1.5, 0], "intensity": [0.8, 0.6, 0.4]}"#,
            [0.0; 3],
        );
        let (hit, view) = hit_floor(&scene);
        let c = direct_illumination(&scene, &hit, &view);
        assert!((c.r - 0.8).abs() < 1e-12);
        assert!((c.g - 0.6).abs() < 1e-12);
        assert!((c.b - 0.4).abs() < 1e-12);
    }

    #[test]
    fn occluded_light_contributes_nothing() {
        let scene = floor_scene(
            r#", {"type": "sphere", "id": "blocker", "center": [0, 0.7, 0], "radius": 0.3,
                 "material": {"kd": [0.5, 0.5, 0.5], "ke": 1}}"#,
            r#"{"position": [0, 1.5, 0], "intensity": [1, 1, 1]}"#,
            [0.0; 3],
        );
        let (hit, view) = hit_floor(&scene);
        let c = direct_illumination(&scene, &hit, &view);
        assert_eq!(c, Rgb::BLACK);
    }

    #[test]
    fn hyperbolic_normal_incidence_gives_kd_li() {
        // A light along the surface normal in H^3: the diffuse term reduces
        // to kd * L_i exactly, with all products Lorentz-orthonormal.
        let scene = parse_scene(
            r#"{
                "manifold": "mirrored_dodecahedron",
                "ambient": [0, 0, 0],
                "camera": {"origin": [0, 0.05, -0.3], "look_at": [0, 0, 0.2], "vfov_deg": 70},
                "lights": [{"position": [0, 0.25, 0], "intensity": [1, 1, 1]}],
                "objects": [{"type": "sphere", "id": "ball", "center": [0, 0, 0], "radius": 0.1,
                             "material": {"kd": [0.6, 0.6, 0.6], "ke": 4}}]
            }"#,
        )
        .unwrap();
        // Hit the ball from straight above: the normal points at the light.
        let top = ModelPoint::from_klein([0.0, 0.2, 0.0]);
        let dir = TangentVec::new(top, Vec4::new(0.0, -1.0, 0.0, 0.0)).reproject_unit();
        let hit = trace_ray(&scene, &top, &dir, 0).expect("ball below");
        let view = TangentVec::new(hit.point, -hit.tangent.v);
        let c = direct_illumination(&scene, &hit, &view);
        // Specular adds reflect(w_i, N) = N dotted with view, so subtract it.
        let w_r_dot_v = hit.normal.metric(&view).clamp(0.0, 1.0).powf(4.0);
        assert!((c.r - (0.6 + 0.0 * w_r_dot_v)).abs() < 1e-9, "c = {c:?}");
    }

    #[test]
    fn hemisphere_samples_live_in_upper_half() {
        let base = ModelPoint::from_klein([0.1, 0.0, -0.2]);
        let normal = TangentVec::new(base, Vec4::new(0.3, 1.0, -0.2, 0.1)).reproject_unit();
        let mut rng = sample_rng(1, 2, 3);
        for _ in 0..2000 {
            let s = sample_hemisphere(&normal, &mut rng);
            assert!(s.w.metric(&normal) >= 0.0);
            assert!((s.w.norm() - 1.0).abs() < 1e-9);
            assert!(s.pdf > 0.0);
        }
    }

    #[test]
    fn hemisphere_cosine_statistics() {
        let base = ModelPoint::euclidean(0.0, 0.0, 0.0);
        let normal = TangentVec::euclidean_dir(base, 0.0, 1.0, 0.0);
        let mut rng = sample_rng(7, 0, 0);
        let n = 200_000;
        let mut sum_cos = 0.0;
        let mut sum_ratio = 0.0;
        for _ in 0..n {
            let s = sample_hemisphere(&normal, &mut rng);
            let g = s.w.metric(&normal);
            sum_cos += g;
            sum_ratio += g / s.pdf;
        }
        // E[cos] = 2/3 under the cosine density; sigma ~ 0.24 / sqrt(n).
        assert!((sum_cos / n as f64 - 2.0 / 3.0).abs() < 3.0 * 0.24 / (n as f64).sqrt());
        // MC estimate of the hemisphere cosine integral.
        assert!((sum_ratio / n as f64 - std::f64::consts::PI).abs() < 0.01 * std::f64::consts::PI);
    }

    #[test]
    fn negative_depth_contributes_nothing() {
        let scene = floor_scene(
            "",
            r#"{"position": [0, 1.5, 0], "intensity": [1, 1, 1]}"#,
            [0.0; 3],
        );
        let p = ModelPoint::euclidean(0.0, 1.0, 0.0);
        let dir = TangentVec::euclidean_dir(p, 0.0, -1.0, 0.0);
        let mut rng = sample_rng(0, 0, 0);
        assert_eq!(
            indirect_illumination(&scene, &p, &dir, -1, 0, &mut rng),
            Rgb::BLACK
        );
    }

    #[test]
    fn depth_zero_equals_direct() {
        let scene = floor_scene(
            "",
            r#"{"position": [0, 1.5, 0], "intensity": [1, 1, 1]}"#,
            [0.0; 3],
        );
        let p = ModelPoint::euclidean(0.0, 1.0, 0.0);
        let dir = TangentVec::euclidean_dir(p, 0.0, -1.0, 0.0);
        let mut rng = sample_rng(0, 0, 0);
        let c = indirect_illumination(&scene, &p, &dir, 0, 0, &mut rng);
        let (hit, view) = hit_floor(&scene);
        let d = direct_with_ambient(&scene, &hit, &view, false);
        assert_eq!(c, d);
    }

    #[test]
    fn one_bounce_matches_quadrature_oracle() {
        // Emissive sphere over a diffuse floor, no point lights: the only
        // light path is floor -> sphere, so one bounce reproduces the
        // hemisphere integral of f_r * L_e * cos.
        let scene = floor_scene(
            r#", {"type": "sphere", "id": "glow", "center": [0, 1.0, 0], "radius": 0.6,
                 "material": {"ke": 1, "emission": [3, 3, 3]}}"#,
            "",
            [0.0; 3],
        );
        // Shade a floor point off to the side of the emitter.
        let p = ModelPoint::euclidean(1.2, 2.5, 0.0);
        let dir = TangentVec::euclidean_dir(p, 0.0, -1.0, 0.0);

        // Monte Carlo: mean of independent one-sample estimates.
        let n = 10_000;
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let mut rng = sample_rng(11, k as u64, 0);
            let c = indirect_illumination(&scene, &p, &dir, 1, 0, &mut rng);
            values.push(c.r);
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();

        // Quadrature oracle: stratified evaluation of the same integral over
        // the cosine-measure parametrization, one jittered point per cell.
        let hit = trace_ray(&scene, &p, &dir, 0).unwrap();
        let view = TangentVec::new(hit.point, -hit.tangent.v);
        let direct_term = direct_with_ambient(&scene, &hit, &view, false).r;
        let material = &scene.objects[hit.object].material;
        let bounce_origin = offset_point(&hit.point, &hit.normal, eps_step::<Scalar>());
        let grid = 100;
        let mut rng = sample_rng(13, 0, 0);
        let mut quad = 0.0;
        for a in 0..grid {
            for b in 0..grid {
                let u1 = (a as f64 + rng.gen::<f64>()) / grid as f64;
                let u2 = (b as f64 + rng.gen::<f64>()) / grid as f64;
                let (ax, bx) = tangent_basis(&hit.normal);
                let r = u1.sqrt();
                let phi = 2.0 * std::f64::consts::PI * u2;
                let cos_theta = (1.0 - u1).sqrt();
                let v = ax.v.scale(r * phi.cos())
                    + bx.v.scale(r * phi.sin())
                    + hit.normal.v.scale(cos_theta);
                let w = TangentVec::new(hit.normal.base, v).reproject_unit();
                let pdf = cos_theta.max(1e-12) / std::f64::consts::PI;
                let w2 = w.rebased_at(bounce_origin);
                let incoming = match trace_ray(&scene, &bounce_origin, &w2, 0) {
                    Some(h) => scene.objects[h.object].material.emission.r,
                    None => 0.0,
                };
                let cos = w.metric(&hit.normal).clamp(0.0, 1.0);
                quad += brdf(material, &hit.normal, &view, &w).r * incoming * cos / pdf;
            }
        }
        quad /= (grid * grid) as f64;
        let expected = direct_term + quad;
        assert!(
            (mean - expected).abs() < 3.0 * se,
            "MC mean {mean} vs quadrature {expected} (3se = {})",
            3.0 * se
        );
    }

    #[test]
    fn radiance_modes() {
        // Pure emitter: radiance is the emission.
        let scene = floor_scene(
            r#", {"type": "sphere", "id": "glow", "center": [0, 1.0, 0], "radius": 0.3,
                 "material": {"ke": 1, "emission": [2, 1, 0.5]}}"#,
            "",
            [0.25; 3],
        );
        let p = ModelPoint::euclidean(0.0, 2.5, 0.0);
        let dir = TangentVec::euclidean_dir(p, 0.0, -1.0, 0.0);
        let mut rng = sample_rng(0, 0, 0);
        let settings = RenderSettings {
            indirect_enabled: false,
            ..RenderSettings::default()
        };
        let c = radiance(&scene, &p, &dir, &settings, &mut rng);
        assert_eq!(c, Rgb::new(2.0, 1.0, 0.5));

        // Miss: background black (aim along the floor plane, above it).
        let side = TangentVec::euclidean_dir(p, 1.0, 0.0, 0.0);
        let c = radiance(&scene, &p, &side, &settings, &mut rng);
        assert_eq!(c, Rgb::BLACK);

        // Indirect disabled: emission + full local model including ambient.
        let lit = parse_scene(
            r#"{
                "manifold": "euclidean_box",
                "ambient": [0.25, 0.25, 0.25],
                "camera": {"origin": [0, 0.5, -2], "look_at": [0, 0, 0], "vfov_deg": 60},
                "lights": [{"position": [0.4, 1.5, 0.2], "intensity": [1, 1, 1]}],
                "objects": [{"type": "quad", "id": "floor", "origin": [-2, 0, -2],
                             "edge_u": [4, 0, 0], "edge_v": [0, 0, 4],
                             "material": {"ka": [0.5, 0.5, 0.5], "kd": [0.8, 0.8, 0.8], "ke": 2}}]
            }"#,
        )
        .unwrap();
        let p2 = ModelPoint::euclidean(0.5, 1.0, 0.0);
        let d2 = TangentVec::euclidean_dir(p2, 0.0, -1.0, 0.0);
        let hit2 = trace_ray(&lit, &p2, &d2, 0).unwrap();
        let view2 = TangentVec::new(hit2.point, -hit2.tangent.v);
        let expected = direct_illumination(&lit, &hit2, &view2);
        let c = radiance(&lit, &p2, &d2, &settings, &mut rng);
        assert_eq!(c, expected);
        assert!(
            c.r > 0.25 * 0.5,
            "ambient term present when indirect is off"
        );
    }

    #[test]
    fn brdf_reflectance_within_energy_budget() {
        // MC estimate of the hemispherical reflectance of f_r for a glossy
        // material at a few view angles, each channel within kd + ks.
        let base = ModelPoint::euclidean(0.0, 0.0, 0.0);
        let normal = TangentVec::euclidean_dir(base, 0.0, 1.0, 0.0);
        let material = Material {
            ka: Rgb::BLACK,
            kd: Rgb::new(0.3, 0.5, 0.1),
            ks: Rgb::new(0.6, 0.4, 0.8),
            ke: 24.0,
            emission: Rgb::BLACK,
        };
        let mut rng = sample_rng(21, 0, 0);
        for view_angle in [0.1f64, 0.7, 1.3] {
            let view = TangentVec::euclidean_dir(base, view_angle.sin(), view_angle.cos(), 0.0)
                .reproject_unit();
            let n = 100_000;
            let mut sum = Rgb::BLACK;
            for _ in 0..n {
                let s = sample_hemisphere(&normal, &mut rng);
                let cos = s.w.metric(&normal).clamp(0.0, 1.0);
                sum += brdf(&material, &normal, &view, &s.w) * (cos / s.pdf);
            }
            let refl = sum / n as f64;
            for (r, budget) in [
                (refl.r, material.kd.r + material.ks.r),
                (refl.g, material.kd.g + material.ks.g),
                (refl.b, material.kd.b + material.ks.b),
            ] {
                assert!(
                    r <= budget * 1.01 + 1e-9,
                    "reflectance {r} over budget {budget}"
                );
                assert!(r > 0.0);
            }
        }
    }
}
