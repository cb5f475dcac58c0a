use surfconf_core::groupring::{zeta, AlgebraElement};
use surfconf_core::surface::{iota_kernel, Limits, SurfaceSpace};

/// Kernel ranks from an independent dense elimination written separately
/// from this crate.
#[test]
fn kernel_ranks_pinned() {
    let limits = Limits::default();
    for (n, g, rank) in [(3, 1, 6), (3, 2, 14), (4, 1, 41), (4, 2, 150), (3, 3, 20)] {
        assert_eq!(iota_kernel(n, g, &limits).unwrap().rank(), rank, "n={n} g={g}");
    }
}

#[test]
fn two_particle_kernel_is_a_line() {
    for g in 1..=4 {
        let s = SurfaceSpace::build(2, g, &Limits::default()).unwrap();
        assert_eq!(s.kernel().rank(), 1);
        assert_eq!(s.quotient_dim(), 4 * g * g + 2 * g - 1);
    }
}

#[test]
fn relator_dies_up_to_four_particles() {
    for (n, g) in [(2, 3), (3, 3), (4, 1), (4, 2), (4, 3)] {
        let s = SurfaceSpace::build(n, g, &Limits::default()).unwrap();
        let z = zeta(g, n).unwrap().sub(&AlgebraElement::one(n)).unwrap();
        assert!(!s.delta_vector(&z).unwrap().is_zero());
        assert!(s.delta_surface(&z).unwrap().is_zero(), "n={n} g={g}");
    }
}

#[test]
fn larger_spaces() {
    let s = SurfaceSpace::build(4, 4, &Limits::default()).unwrap();
    assert_eq!(s.report().ambient_dim, 7920);
    assert_eq!(s.kernel().rank(), 499);
    let s = SurfaceSpace::build(4, 3, &Limits::default()).unwrap();
    assert_eq!((s.ambient_dim(), s.kernel().rank()), (3024, 303));
}

#[test]
fn cache_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let x = SurfaceSpace::load_or_build(3, 2, &Limits::default(), Some(a.path())).unwrap();
    let y = SurfaceSpace::load_or_build(3, 2, &Limits::default(), Some(b.path())).unwrap();
    assert_eq!(x.kernel(), y.kernel());
    let pa = std::fs::read(SurfaceSpace::cache_path(a.path(), 3, 2)).unwrap();
    let pb = std::fs::read(SurfaceSpace::cache_path(b.path(), 3, 2)).unwrap();
    assert_eq!(pa, pb);
    assert!(SurfaceSpace::cache_path(a.path(), 3, 2).to_string_lossy().ends_with("surface-n3-g2-c1-f1.txt"));
}
