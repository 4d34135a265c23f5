//! Renderable world description and its on-disk format.
//!
//! Scenes are authored as JSON with chart coordinates: plain xyz for
//! Euclidean manifolds, Klein-ball coordinates (three numbers, norm < 1)
//! for hyperbolic ones. Parsing lifts every point onto the model manifold,
//! expands generated geometry (dodecahedral edge tubes) and validates all
//! scene invariants before returning.

use crate::camera::{lift_point, Camera};
use crate::color::Rgb;
use crate::geometry::{distance, log_map, to_klein, GeometryTag, TangentVec};
use crate::quotient::{distance_to_nearest_face, dodecahedron_edge_segments, QuotientManifold};
use crate::vec4::Vec4;
use crate::{Manifold, Point, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Phong-style surface coefficients plus emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub ka: Rgb,
    pub kd: Rgb,
    pub ks: Rgb,
    /// Roughness exponent, >= 1.
    pub ke: Scalar,
    pub emission: Rgb,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// Geodesic sphere: all points at geodesic distance `radius` from center.
    Sphere { center: Point, radius: Scalar },
    /// Planar rectangular patch, Euclidean scenes only.
    Quad {
        origin: Point,
        edge_u: Vec4<Scalar>,
        edge_v: Vec4<Scalar>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub id: String,
    pub shape: Shape,
    pub material: Material,
    /// Generated decoration (edge tubes) is exempt from the fit rule.
    pub decoration: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLight {
    pub position: Point,
    pub intensity: Rgb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    FlatTorus,
    MirroredDodecahedron,
    EuclideanBox,
}

impl ManifoldKind {
    pub fn name(self) -> &'static str {
        match self {
            ManifoldKind::FlatTorus => "flat_torus",
            ManifoldKind::MirroredDodecahedron => "mirrored_dodecahedron",
            ManifoldKind::EuclideanBox => "euclidean_box",
        }
    }

    pub fn build(self) -> Manifold {
        match self {
            ManifoldKind::FlatTorus => QuotientManifold::flat_torus(),
            ManifoldKind::MirroredDodecahedron => QuotientManifold::mirrored_dodecahedron(),
            ManifoldKind::EuclideanBox => QuotientManifold::euclidean_box(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub kind: ManifoldKind,
    pub manifold: Manifold,
    pub ambient: Rgb,
    pub camera: Camera,
    pub lights: Vec<PointLight>,
    pub objects: Vec<SceneObject>,
    /// Authored edge-tube requests, kept for round-trip serialization.
    edge_tubes: Vec<EdgeTubesDoc>,
    camera_doc: CameraDoc,
}

impl Scene {
    pub fn tag(&self) -> GeometryTag {
        self.manifold.tag
    }
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scene validation failed:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),
}

/// One violated invariant, naming the entity and the rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub entity: String,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.entity, self.rule)
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  - {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

// ---------------------------------------------------------------------------
// Serde document types (authoring schema)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct SceneDoc {
    manifold: String,
    ambient: [Scalar; 3],
    camera: CameraDoc,
    #[serde(default)]
    lights: Vec<LightDoc>,
    #[serde(default)]
    objects: Vec<ObjectDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct CameraDoc {
    origin: [Scalar; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    look_at: Option<[Scalar; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    up: Option<[Scalar; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame: Option<FrameDoc>,
    vfov_deg: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct FrameDoc {
    right: [Scalar; 3],
    up: [Scalar; 3],
    forward: [Scalar; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct LightDoc {
    position: [Scalar; 3],
    intensity: [Scalar; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct MaterialDoc {
    #[serde(default)]
    ka: [Scalar; 3],
    #[serde(default)]
    kd: [Scalar; 3],
    #[serde(default)]
    ks: [Scalar; 3],
    #[serde(default = "one")]
    ke: Scalar,
    #[serde(default)]
    emission: [Scalar; 3],
}

fn one() -> Scalar {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type")]
enum ObjectDoc {
    #[serde(rename = "sphere")]
    Sphere {
        id: String,
        center: [Scalar; 3],
        radius: Scalar,
        material: MaterialDoc,
    },
    #[serde(rename = "quad")]
    Quad {
        id: String,
        origin: [Scalar; 3],
        edge_u: [Scalar; 3],
        edge_v: [Scalar; 3],
        material: MaterialDoc,
    },
    #[serde(rename = "edge_tubes")]
    EdgeTubes(EdgeTubesDoc),
}

/// Spheres strung along the fundamental-domain edge skeleton.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeTubesDoc {
    pub id: String,
    pub radius: Scalar,
    pub spheres_per_edge: u32,
    material: MaterialDoc,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parses and fully validates a scene file.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let doc: SceneDoc = serde_json::from_str(text).map_err(|e| SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let scene = build_scene(doc)?;
    let violations = validate(&scene);
    if violations.is_empty() {
        Ok(scene)
    } else {
        Err(SceneError::Validation(violations))
    }
}

/// Serializes a scene back to its authoring document. Generated decoration
/// objects are re-emitted as the edge-tube requests that produced them.
pub fn serialize_scene(scene: &Scene) -> String {
    let tag = scene.tag();
    let chart = |p: &Point| -> [Scalar; 3] {
        match tag {
            GeometryTag::Hyperbolic => to_klein(p),
            _ => [p.coords.x, p.coords.y, p.coords.z],
        }
    };
    let mat = |m: &Material| MaterialDoc {
        ka: m.ka.to_array(),
        kd: m.kd.to_array(),
        ks: m.ks.to_array(),
        ke: m.ke,
        emission: m.emission.to_array(),
    };
    let mut objects: Vec<ObjectDoc> = Vec::new();
    for o in scene.objects.iter().filter(|o| !o.decoration) {
        objects.push(match &o.shape {
            Shape::Sphere { center, radius } => ObjectDoc::Sphere {
                id: o.id.clone(),
                center: chart(center),
                radius: *radius,
                material: mat(&o.material),
            },
            Shape::Quad {
                origin,
                edge_u,
                edge_v,
            } => ObjectDoc::Quad {
                id: o.id.clone(),
                origin: chart(origin),
                edge_u: [edge_u.x, edge_u.y, edge_u.z],
                edge_v: [edge_v.x, edge_v.y, edge_v.z],
                material: mat(&o.material),
            },
        });
    }
    objects.extend(scene.edge_tubes.iter().cloned().map(ObjectDoc::EdgeTubes));
    let doc = SceneDoc {
        manifold: scene.kind.name().to_string(),
        ambient: scene.ambient.to_array(),
        camera: scene.camera_doc.clone(),
        lights: scene
            .lights
            .iter()
            .map(|l| LightDoc {
                position: chart(&l.position),
                intensity: l.intensity.to_array(),
            })
            .collect(),
        objects,
    };
    serde_json::to_string_pretty(&doc).expect("scene document serializes")
}

fn build_scene(doc: SceneDoc) -> Result<Scene, SceneError> {
    let kind = match doc.manifold.as_str() {
        "flat_torus" => ManifoldKind::FlatTorus,
        "mirrored_dodecahedron" => ManifoldKind::MirroredDodecahedron,
        "euclidean_box" => ManifoldKind::EuclideanBox,
        other => {
            return Err(SceneError::Validation(vec![Violation {
                entity: "manifold".into(),
                rule: format!(
                    "unknown manifold {other:?}; expected flat_torus, \
                     mirrored_dodecahedron or euclidean_box"
                ),
            }]))
        }
    };
    let manifold = kind.build();
    let tag = manifold.tag;

    let mut violations = Vec::new();
    let mut check_chart = |entity: &str, p: [Scalar; 3]| {
        if tag == GeometryTag::Hyperbolic {
            let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            if n2 >= 1.0 {
                violations.push(Violation {
                    entity: entity.to_string(),
                    rule: format!("Klein coordinates must have norm < 1, got |k|^2 = {n2}"),
                });
            }
        }
    };

    check_chart("camera.origin", doc.camera.origin);
    for (i, l) in doc.lights.iter().enumerate() {
        check_chart(&format!("lights[{i}]"), l.position);
    }
    for o in &doc.objects {
        if let ObjectDoc::Sphere { id, center, .. } = o {
            check_chart(&format!("object {id}"), *center);
        }
    }
    if !violations.is_empty() {
        return Err(SceneError::Validation(violations));
    }

    let lift = |p: [Scalar; 3]| lift_point(tag, p);

    let camera = build_camera(&doc.camera, tag)?;

    let lights = doc
        .lights
        .iter()
        .map(|l| PointLight {
            position: lift(l.position),
            intensity: Rgb::from_array(l.intensity),
        })
        .collect();

    let mut objects = Vec::new();
    let mut edge_tubes = Vec::new();
    for o in &doc.objects {
        match o {
            ObjectDoc::Sphere {
                id,
                center,
                radius,
                material,
            } => objects.push(SceneObject {
                id: id.clone(),
                shape: Shape::Sphere {
                    center: lift(*center),
                    radius: *radius,
                },
                material: build_material(material),
                decoration: false,
            }),
            ObjectDoc::Quad {
                id,
                origin,
                edge_u,
                edge_v,
                material,
            } => objects.push(SceneObject {
                id: id.clone(),
                shape: Shape::Quad {
                    origin: lift(*origin),
                    edge_u: Vec4::new(edge_u[0], edge_u[1], edge_u[2], 0.0),
                    edge_v: Vec4::new(edge_v[0], edge_v[1], edge_v[2], 0.0),
                },
                material: build_material(material),
                decoration: false,
            }),
            ObjectDoc::EdgeTubes(tubes) => {
                if kind != ManifoldKind::MirroredDodecahedron {
                    return Err(SceneError::Validation(vec![Violation {
                        entity: format!("object {}", tubes.id),
                        rule: "edge_tubes require the mirrored_dodecahedron manifold".into(),
                    }]));
                }
                objects.extend(expand_edge_tubes(tubes));
                edge_tubes.push(tubes.clone());
            }
        }
    }

    Ok(Scene {
        kind,
        manifold,
        ambient: Rgb::from_array(doc.ambient),
        camera,
        lights,
        objects,
        edge_tubes,
        camera_doc: doc.camera,
    })
}

fn build_material(doc: &MaterialDoc) -> Material {
    Material {
        ka: Rgb::from_array(doc.ka),
        kd: Rgb::from_array(doc.kd),
        ks: Rgb::from_array(doc.ks),
        ke: doc.ke,
        emission: Rgb::from_array(doc.emission),
    }
}

fn build_camera(doc: &CameraDoc, tag: GeometryTag) -> Result<Camera, SceneError> {
    let origin = lift_point(tag, doc.origin);
    let vfov = doc.vfov_deg.to_radians();
    if let Some(frame) = &doc.frame {
        let axis =
            |a: [Scalar; 3]| TangentVec::new(origin, Vec4::new(a[0], a[1], a[2], 0.0)).reproject();
        return Ok(Camera::from_frame(
            origin,
            axis(frame.right),
            axis(frame.up),
            axis(frame.forward),
            vfov,
        ));
    }
    let look_at = doc.look_at.ok_or_else(|| {
        SceneError::Validation(vec![Violation {
            entity: "camera".into(),
            rule: "either look_at or frame must be given".into(),
        }])
    })?;
    let up = doc.up.unwrap_or([0.0, 1.0, 0.0]);
    Camera::look_at(origin, &lift_point(tag, look_at), up, vfov).ok_or_else(|| {
        SceneError::Validation(vec![Violation {
            entity: "camera".into(),
            rule: "look_at coincides with origin or up hint is parallel to view".into(),
        }])
    })
}

/// Spheres of the requested radius spaced at equal geodesic arc length along
/// each edge of the right-angled dodecahedron.
fn expand_edge_tubes(tubes: &EdgeTubesDoc) -> Vec<SceneObject> {
    let material = build_material(&tubes.material);
    let mut out = Vec::new();
    for (e, (a, b)) in dodecahedron_edge_segments::<Scalar>()
        .into_iter()
        .enumerate()
    {
        let Some((dir, len)) = log_map(GeometryTag::Hyperbolic, &a, &b) else {
            continue;
        };
        let n = tubes.spheres_per_edge.max(1);
        for k in 0..n {
            let t = len * (k as Scalar + 0.5) / n as Scalar;
            let center = crate::geometry::geodesic(GeometryTag::Hyperbolic, &a, &dir, t).0;
            out.push(SceneObject {
                id: format!("{}.e{}.{}", tubes.id, e, k),
                shape: Shape::Sphere {
                    center,
                    radius: tubes.radius,
                },
                material,
                decoration: true,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Checks every scene invariant, returning an empty list when all hold.
pub fn validate(scene: &Scene) -> Vec<Violation> {
    let mut out = Vec::new();
    let q = &scene.manifold;
    let tag = scene.tag();

    let finite_nonneg = |c: Rgb| c.is_finite() && c.r >= 0.0 && c.g >= 0.0 && c.b >= 0.0;

    if !finite_nonneg(scene.ambient) {
        out.push(Violation {
            entity: "ambient".into(),
            rule: "ambient intensity must be finite and non-negative".into(),
        });
    }

    for o in &scene.objects {
        let entity = format!("object {}", o.id);
        let m = &o.material;
        for (a, b) in [(m.kd.r, m.ks.r), (m.kd.g, m.ks.g), (m.kd.b, m.ks.b)] {
            if a + b > 1.0 + 1e-12 {
                out.push(Violation {
                    entity: entity.clone(),
                    rule: format!(
                        "material violates energy conservation: kd + ks = {} > 1",
                        a + b
                    ),
                });
                break;
            }
        }
        let in_unit = |c: Rgb| {
            (0.0..=1.0).contains(&c.r) && (0.0..=1.0).contains(&c.g) && (0.0..=1.0).contains(&c.b)
        };
        if !(in_unit(m.ka) && in_unit(m.kd) && in_unit(m.ks)) {
            out.push(Violation {
                entity: entity.clone(),
                rule: "reflection coefficients must lie in [0,1]".into(),
            });
        }
        if m.ke < 1.0 {
            out.push(Violation {
                entity: entity.clone(),
                rule: format!("roughness exponent must be >= 1, got {}", m.ke),
            });
        }
        if !finite_nonneg(m.emission) {
            out.push(Violation {
                entity: entity.clone(),
                rule: "emission must be finite and non-negative".into(),
            });
        }
        match &o.shape {
            Shape::Sphere { center, radius } => {
                if *radius <= 0.0 {
                    out.push(Violation {
                        entity: entity.clone(),
                        rule: format!("sphere radius must be positive, got {radius}"),
                    });
                }
                if !q.contains(center) {
                    out.push(Violation {
                        entity: entity.clone(),
                        rule: "sphere center lies outside the fundamental domain".into(),
                    });
                } else if !o.decoration && !q.faces.is_empty() {
                    let fit = distance_to_nearest_face(q, center);
                    if *radius >= fit {
                        out.push(Violation {
                            entity: entity.clone(),
                            rule: format!(
                                "sphere of radius {radius} does not fit inside the domain \
                                 (distance to nearest face {fit})"
                            ),
                        });
                    }
                }
            }
            Shape::Quad { edge_u, edge_v, .. } => {
                if tag != GeometryTag::Euclidean {
                    out.push(Violation {
                        entity: entity.clone(),
                        rule: "planar quads are only meaningful in Euclidean scenes".into(),
                    });
                }
                if edge_u.dot3(edge_u) <= 0.0 || edge_v.dot3(edge_v) <= 0.0 {
                    out.push(Violation {
                        entity: entity.clone(),
                        rule: "quad edges must be non-degenerate".into(),
                    });
                }
            }
        }
    }

    for (i, l) in scene.lights.iter().enumerate() {
        let entity = format!("lights[{i}]");
        if !finite_nonneg(l.intensity) {
            out.push(Violation {
                entity: entity.clone(),
                rule: "light intensity must be finite and non-negative".into(),
            });
        }
        if !q.contains(&l.position) {
            out.push(Violation {
                entity: entity.clone(),
                rule: "light position lies outside the fundamental domain".into(),
            });
        }
        if let Some(o) = containing_sphere(scene, &l.position) {
            out.push(Violation {
                entity,
                rule: format!("light sits inside object {}", o),
            });
        }
    }

    if !(scene.camera.vfov > 0.0 && scene.camera.vfov < std::f64::consts::PI) {
        out.push(Violation {
            entity: "camera".into(),
            rule: format!(
                "vertical field of view must be in (0, 180) degrees, got {}",
                scene.camera.vfov.to_degrees()
            ),
        });
    }
    if !q.contains(&scene.camera.origin) {
        out.push(Violation {
            entity: "camera".into(),
            rule: "origin lies outside the fundamental domain".into(),
        });
    }
    if let Some(o) = containing_sphere(scene, &scene.camera.origin) {
        out.push(Violation {
            entity: "camera".into(),
            rule: format!("origin sits inside object {}", o),
        });
    }
    if scene.camera.frame_error() > 1e-9 {
        out.push(Violation {
            entity: "camera".into(),
            rule: format!(
                "frame is not g-orthonormal at the origin (error {:.3e})",
                scene.camera.frame_error()
            ),
        });
    }

    out
}

fn containing_sphere<'a>(scene: &'a Scene, p: &Point) -> Option<&'a str> {
    scene.objects.iter().find_map(|o| match &o.shape {
        Shape::Sphere { center, radius } if distance(scene.tag(), center, p) < *radius => {
            Some(o.id.as_str())
        }
        _ => None,
    })
}
