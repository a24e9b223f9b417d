use sonarloc_web::{facing_yaw, project_asset, sad_heatmap, sonar_info, MissionDemo};

#[test]
fn sonar_info_reports_scale() {
    let info = sonar_info();
    assert_eq!(info.len(), 5);
    assert!((info[0] - 12.7017).abs() < 5e-5);
}

#[test]
fn asset_ahead_projects_to_image_centre_line() {
    let yaw = facing_yaw(-10.0, 0.0);
    let out = project_asset(-10.0, 0.0, yaw);
    assert_eq!(out.len(), 12);
    let width = sonar_info()[1];
    assert!((out[0] - width / 2.0).abs() < 1e-9);
    assert!((out[3] - 10.0).abs() < 1e-9);
    assert!(project_asset(-10.0, 0.0, yaw + std::f64::consts::PI).is_empty());
}

#[test]
fn heatmap_has_truth_and_twin_peaks() {
    let (n, extent) = (41, 20.0);
    let cell = 2.0 * extent / n as f64;
    let (tx, ty) = (-10.0, 0.0);
    let map = sad_heatmap(tx, ty, facing_yaw(tx, ty), n, extent, 64);
    assert_eq!(map.len(), n * n);
    let at = |x: f64, y: f64| {
        let col = ((x + extent) / cell).floor() as usize;
        let row = ((extent - y) / cell).floor() as usize;
        map[row * n + col]
    };
    let background = at(-18.0, 18.0);
    assert!(at(tx, ty) > 0.5);
    assert!(at(-tx, -ty) > 0.5);
    assert!(background < 1e-3);
}

#[test]
fn mission_demo_runs_to_the_end() {
    let mut demo = MissionDemo::new(1, true, 500, 3).unwrap();
    assert_eq!(demo.particles().len(), 2000);
    assert_eq!(demo.assets().len() % 5, 0);
    let mut finished = false;
    for _ in 0..10_000 {
        if demo.step(50).unwrap() {
            finished = true;
            break;
        }
    }
    assert!(finished);
    assert!(demo.distance() > 0.0);
    assert_eq!(demo.estimate().len(), 5);
}
