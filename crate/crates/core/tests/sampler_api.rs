use sphdpp::limits::{bin_edges, pair_correlation_estimate};
use sphdpp::sampler::{restrict_and_pullback, sample_projection_dpp, sample_replicas, scale_config, to_complex_plane};
use sphdpp::{KernelSpec, Space};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn replicas_do_not_depend_on_thread_count() {
    let spec = KernelSpec::spherical(9).unwrap();
    let one = pool(1).install(|| sample_replicas(&spec, 5, 12).unwrap());
    let many = pool(4).install(|| sample_replicas(&spec, 5, 12).unwrap());
    assert_eq!(one, many);
    for (r, c) in one.iter().enumerate() {
        assert_eq!(c.replica, r as u64);
        assert_eq!(c, &sample_projection_dpp(&spec, 5, r as u64).unwrap());
        c.validate().unwrap();
    }
    assert_ne!(one[0].points, one[1].points);
}

#[test]
fn estimator_does_not_depend_on_thread_count() {
    let spec = KernelSpec::harmonic(2, 2).unwrap();
    let edges = bin_edges(0.0, std::f64::consts::PI, 6);
    let a = pool(1).install(|| pair_correlation_estimate(&spec, 50, &edges, 3).unwrap());
    let b = pool(3).install(|| pair_correlation_estimate(&spec, 50, &edges, 3).unwrap());
    assert_eq!(a, b);
}

#[test]
fn pipeline_spaces() {
    let c = sample_projection_dpp(&KernelSpec::spherical(20).unwrap(), 1, 0).unwrap();
    assert_eq!(c.space, Space::Sphere(2));
    let plane = to_complex_plane(&c).unwrap();
    assert_eq!(plane.space, Space::ComplexPlane);
    assert_eq!(plane.len(), 20);
    let t = restrict_and_pullback(&c, std::f64::consts::PI).unwrap();
    assert_eq!(t.space, Space::Tangent(2));
    assert!(t.len() <= 20);
    let s = scale_config(&t, 3.0).unwrap();
    assert_eq!(s.scale, 3.0);
    assert!(scale_config(&c, 2.0).is_err());
    assert!(restrict_and_pullback(&t, 1.0).is_err());
    let cue = sample_projection_dpp(&KernelSpec::cue(3).unwrap(), 1, 0).unwrap();
    assert!(to_complex_plane(&cue).is_err());
}
