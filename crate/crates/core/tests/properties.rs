mod common;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use conigen::io::{cbf, hexfloat, mps, sdpa};
use conigen::linalg::{frob, sym_eigenvalues};
use conigen::lo::{gen_lo_both, gen_lo_interior, LoPartition};
use conigen::randkit::{gen_orthonormal, gen_psd, PsdMethod, RngStream};
use conigen::sdo::{gen_sdo_block_both, gen_sdo_eig_both, gen_sdo_interior};
use conigen::soco::{cone_margin, gen_soco_both, gen_soco_interior, interiorize, jordan_product};
use conigen::GenControls;

use common::general_case;

fn small() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(small())]

    #[test]
    fn hexfloat_round_trips_every_bit_pattern(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        let back = hexfloat::parse(&hexfloat::format(x)).unwrap();
        if x.is_nan() {
            prop_assert!(back.is_nan());
        } else {
            prop_assert_eq!(back.to_bits(), bits);
        }
    }

    #[test]
    fn jordan_product_is_commutative_with_identity(v in prop::collection::vec(-10.0f64..10.0, 1..6),
                                                    w in prop::collection::vec(-10.0f64..10.0, 1..6)) {
        let k = v.len().min(w.len());
        let (v, w) = (&v[..k], &w[..k]);
        prop_assert_eq!(jordan_product(v, w).unwrap(), jordan_product(w, v).unwrap());
        let mut e = vec![0.0; k];
        e[0] = 1.0;
        prop_assert_eq!(jordan_product(v, &e).unwrap(), DVector::from_column_slice(v));
    }

    #[test]
    fn interiorize_lands_strictly_inside(head in prop_oneof![-5.0f64..-1e-3, 1e-3f64..5.0],
                                         tail in prop::collection::vec(-5.0f64..5.0, 0..5)) {
        let mut v = vec![head];
        v.extend(tail);
        let out = interiorize(&v).unwrap();
        prop_assert!(cone_margin(out.as_slice()) > 0.0);
        prop_assert_eq!(&out.as_slice()[1..], &v[1..]);
    }

    #[test]
    fn orthonormal_columns(n in 1usize..9, seed in any::<u64>()) {
        let q = gen_orthonormal(n, &mut RngStream::new(seed, 0)).unwrap();
        let err = (q.transpose() * &q - DMatrix::identity(n, n)).abs().max();
        prop_assert!(err < 1e-12, "{}", err);
    }

    #[test]
    fn prescribed_spectrum_is_reproduced(spec in prop::collection::vec(0.0f64..10.0, 1..8), seed in any::<u64>()) {
        let p = gen_psd(spec.len(), PsdMethod::Spectral, Some(&spec), &mut RngStream::new(seed, 1)).unwrap();
        let mut want = spec.clone();
        want.sort_by(f64::total_cmp);
        let got = sym_eigenvalues(&p);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-10, "{:?} vs {:?}", got, want);
        }
    }

    #[test]
    fn psd_methods_give_symmetric_psd(n in 1usize..8, seed in any::<u64>(), k in 0usize..4) {
        let method = [PsdMethod::Gram, PsdMethod::CholeskyLike, PsdMethod::Spectral, PsdMethod::Ldl][k];
        let p = gen_psd(n, method, None, &mut RngStream::new(seed, 2)).unwrap();
        prop_assert_eq!(&p, &p.transpose());
        let scale = p.abs().max().max(1.0);
        prop_assert!(sym_eigenvalues(&p)[0] >= -1e-12 * scale);
    }

    #[test]
    fn lo_both_is_orthogonal(seed in any::<u64>(), n in 2usize..10, pick in 0usize..100, nb in 1usize..10) {
        let m = 1 + pick % (n - 1);
        let part = LoPartition::leading(n, nb.min(n));
        let c = GenControls::seeded(seed);
        let (inst, cert) = gen_lo_both(m, n, &part, &c, pick % 2 == 0).unwrap();
        let (i, o) = (cert.interior.unwrap(), cert.optimal.unwrap());
        let dot = (&i.x - &o.x).dot(&(&i.s - &o.s));
        let scale = i.x.norm() * i.s.norm();
        prop_assert!(dot.abs() <= 1e-10 * scale.max(1.0), "{}", dot);
        prop_assert_eq!(inst.rows(), m + 1);
    }

    #[test]
    fn sdo_both_is_orthogonal(seed in any::<u64>(), n in 2usize..6, nb in 0usize..6, nn in 0usize..6, pick in 0usize..100, eig in any::<bool>()) {
        let nb = nb.min(n);
        let nn = nn.min(n - nb);
        let m = 1 + pick % (n * (n + 1) / 2 - 1);
        let c = GenControls::seeded(seed);
        let r = if eig { gen_sdo_eig_both(m, n, nb, nn, &c) } else { gen_sdo_block_both(m, n, nb, nn, &c) };
        let (_, cert) = r.unwrap();
        let (i, o) = (cert.interior.unwrap(), cert.optimal.unwrap());
        let dot = frob(&(&i.x - &o.x), &(&i.s - &o.s));
        prop_assert!(dot.abs() <= 1e-10 * (i.x.norm() * i.s.norm()).max(1.0), "{}", dot);
    }

    #[test]
    fn soco_both_is_orthogonal(seed in 0u64..10_000) {
        let (m, dims, labels) = general_case(seed);
        let (_, cert) = gen_soco_both(m, &dims, &labels, &GenControls::seeded(seed)).unwrap();
        let (i, o) = (cert.interior.unwrap(), cert.optimal.unwrap());
        let dot = (&i.x - &o.x).dot(&(&i.s - &o.s));
        prop_assert!(dot.abs() <= 1e-10 * (i.x.norm() * i.s.norm()).max(1.0), "{}", dot);
    }

    #[test]
    fn mps_round_trip(seed in any::<u64>(), n in 2usize..9, pick in 0usize..100, density in 0.2f64..1.0) {
        let m = 1 + pick % (n - 1);
        let mut c = GenControls::seeded(seed);
        c.density = Some(density);
        let (inst, _) = gen_lo_interior(m, n, &c, None, None).unwrap();
        prop_assert_eq!(mps::parse(&mps::to_string(&inst, "prop")).unwrap(), inst);
    }

    #[test]
    fn sdpa_round_trip(seed in any::<u64>(), n in 2usize..6, pick in 0usize..100, diagonal in any::<bool>()) {
        let m = 1 + pick % (n * (n + 1) / 2 - 1);
        let (inst, _) = gen_sdo_interior(m, n, &GenControls::seeded(seed), diagonal).unwrap();
        prop_assert_eq!(sdpa::parse(&sdpa::to_string(&inst)).unwrap(), inst);
    }

    #[test]
    fn cbf_round_trip(seed in any::<u64>(), dims in prop::collection::vec(1usize..5, 1..5), pick in 0usize..100) {
        let n: usize = dims.iter().sum();
        prop_assume!(n >= 2);
        let m = 1 + pick % (n - 1);
        let (inst, _) = gen_soco_interior(m, &dims, &GenControls::seeded(seed)).unwrap();
        prop_assert_eq!(cbf::parse(&cbf::to_string(&inst)).unwrap(), inst);
    }
}
