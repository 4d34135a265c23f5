//! The shipped scene files parse, validate and render sanely.

use deckray::integrator::RenderSettings;
use deckray::render::render;
use deckray::scene::{parse_scene, validate, Shape};

fn corpus(name: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenes");
    std::fs::read_to_string(format!("{path}/{name}")).expect("corpus scene present")
}

#[test]
fn cornell_torus_parses_with_expected_structure() {
    let scene = parse_scene(&corpus("cornell_torus.json")).unwrap();
    assert!(validate(&scene).is_empty());
    let quads = scene
        .objects
        .iter()
        .filter(|o| matches!(o.shape, Shape::Quad { .. }))
        .count();
    let spheres = scene
        .objects
        .iter()
        .filter(|o| matches!(o.shape, Shape::Sphere { .. }))
        .count();
    // Floor, back, two side walls and a four-strip ceiling with a window gap.
    assert_eq!(quads, 8);
    assert_eq!(spheres, 3);
    assert_eq!(scene.lights.len(), 1);
    assert!(scene
        .objects
        .iter()
        .any(|o| o.id.contains("ceiling") && matches!(o.shape, Shape::Quad { .. })));
}

#[test]
fn mirrored_dodecahedron_parses_and_renders() {
    let scene = parse_scene(&corpus("mirrored_dodecahedron.json")).unwrap();
    assert!(validate(&scene).is_empty());
    let authored: Vec<_> = scene.objects.iter().filter(|o| !o.decoration).collect();
    assert_eq!(authored.len(), 3);
    assert_eq!(
        scene.objects.iter().filter(|o| o.decoration).count(),
        30 * 12
    );

    let settings = RenderSettings {
        spp: 1,
        max_bounces: 1,
        max_transport_level: 4,
        ..RenderSettings::default()
    };
    let image = render(&scene, &settings, 32, 24);
    assert!(image.all_finite());
    assert!(image.mean_luminance() > 0.0);
}

#[test]
fn corpus_round_trips() {
    for name in ["cornell_torus.json", "mirrored_dodecahedron.json"] {
        let s1 = parse_scene(&corpus(name)).unwrap();
        let t2 = deckray::scene::serialize_scene(&s1);
        let s2 = parse_scene(&t2).unwrap();
        assert_eq!(t2, deckray::scene::serialize_scene(&s2), "{name} fixpoint");
        assert_eq!(s1.objects.len(), s2.objects.len());
    }
}
