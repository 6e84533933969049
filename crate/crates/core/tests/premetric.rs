use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quartic_finsler::catalog::Preset;
use quartic_finsler::premetric::{
    assemble_chi, cross_section, fresnel_tensor, isotropic_chi, left_right_dual, uniaxial_chi, uniaxial_quartic,
    BlockView, ConstitutiveTensor, BIVECTORS,
};
use quartic_finsler::quartic::{SymQuadric, SymQuartic};

fn idx(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * 4 + j) * 4 + k) * 4 + l
}

/// Permutation parity by counting inversions.
fn eps(p: [usize; 4]) -> f64 {
    let mut seen = [false; 4];
    for &x in &p {
        if seen[x] {
            return 0.0;
        }
        seen[x] = true;
    }
    let inv = (0..4).flat_map(|a| ((a + 1)..4).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count();
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn random_blocks(rng: &mut ChaCha8Rng) -> BlockView {
    let mut m = || {
        let mut b = [[0.0; 3]; 3];
        for row in b.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
            }
        }
        b
    };
    BlockView {
        eps: m(),
        pi: m(),
        gamma: m(),
        gamma_tilde: m(),
    }
}

/// `(1/4!) e_mnpq e_rstu chi^{mnri} chi^{jpsk} chi^{lqtu}`, symmetrized
/// over `ijkl` by averaging.
fn fresnel_oracle(chi: &ConstitutiveTensor) -> Vec<f64> {
    let mut perms = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if eps(p) != 0.0 {
                        perms.push(p);
                    }
                }
            }
        }
    }
    let mut raw = vec![0.0; 256];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut s = 0.0;
                    for &[m, n, p, q] in &perms {
                        let e1 = eps([m, n, p, q]);
                        for &[r, t, u, w] in &perms {
                            s += e1
                                * eps([r, t, u, w])
                                * chi.get(m, n, r, i)
                                * chi.get(j, p, t, k)
                                * chi.get(l, q, u, w);
                        }
                    }
                    raw[idx(i, j, k, l)] = s / 24.0;
                }
            }
        }
    }
    let mut sym = vec![0.0; 256];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let x = [i, j, k, l];
                    let mut s = 0.0;
                    for &p in &perms {
                        s += raw[idx(x[p[0]], x[p[1]], x[p[2]], x[p[3]])];
                    }
                    sym[idx(i, j, k, l)] = s / 24.0;
                }
            }
        }
    }
    sym
}

fn eval_dense(d: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s += d[idx(i, j, k, l)] * q[i] * q[j] * q[k] * q[l];
                }
            }
        }
    }
    s
}

#[test]
fn fresnel_matches_epsilon_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = vec![
        isotropic_chi(&SymQuadric::minkowski(4)).unwrap(),
        uniaxial_chi(2.0, 3.0, 1.5).unwrap(),
    ];
    for _ in 0..3 {
        cases.push(assemble_chi(&random_blocks(&mut rng)));
    }
    for chi in &cases {
        let g = fresnel_tensor(chi).into_quartic();
        let oracle = fresnel_oracle(chi);
        let scale = oracle.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let d = (g.component(i, j, k, l) - oracle[idx(i, j, k, l)]).abs();
                        assert!(d <= 1e-12 * scale, "{i}{j}{k}{l}: {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn dual_matches_brute_force_and_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..3 {
        let chi = assemble_chi(&random_blocks(&mut rng));
        let dual = left_right_dual(&chi);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut s = 0.0;
                        for m in 0..4 {
                            for n in 0..4 {
                                for k in 0..4 {
                                    for l in 0..4 {
                                        s += eps([a, b, m, n]) * chi.get(m, n, k, l) * eps([k, l, c, d]);
                                    }
                                }
                            }
                        }
                        assert!((dual.get(a, b, c, d) - 0.25 * s).abs() < 1e-14);
                    }
                }
            }
        }
        let twice = left_right_dual(&dual.as_constitutive().unwrap());
        for (x, y) in twice.dense().iter().zip(chi.dense()) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}

#[test]
fn thirty_six_independent_components() {
    // orbits of index quadruples under the pair antisymmetries, zero orbits dropped
    let mut reps = std::collections::BTreeSet::new();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    if i != j && k != l {
                        reps.insert((i.min(j), i.max(j), k.min(l), k.max(l)));
                    }
                }
            }
        }
    }
    assert_eq!(reps.len(), 36);

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let chi = assemble_chi(&random_blocks(&mut rng));
    let mut values: Vec<f64> = reps.iter().map(|&(i, j, k, l)| chi.get(i, j, k, l).abs()).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    assert_eq!(values.len(), 36);
    assert_eq!(BIVECTORS.len() * BIVECTORS.len(), 36);
    // round trip through the blocks
    let blocks = chi.split();
    assert_eq!(assemble_chi(&blocks), chi);
}

#[test]
fn vacuum_constant_is_minus_one_eighth() {
    let g = SymQuadric::minkowski(4);
    let fresnel = fresnel_tensor(&isotropic_chi(&g).unwrap());
    assert_eq!(fresnel.eval(&[1.0, 0.0, 0.0, 0.0]), -0.125);
    let chi = isotropic_chi(&g).unwrap();
    assert_eq!(chi.get(0, 1, 0, 1), -0.5);
    assert_eq!(Preset::Vacuum.quartic().unwrap(), fresnel.into_quartic());
}

#[test]
fn uniaxial_constant_is_minus_inverse_mu_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for (eo, ee, mu) in [(2.0, 3.0, 1.0), (1.2, 0.4, 2.5), (5.0, 5.0, 0.3)] {
        let g = fresnel_tensor(&uniaxial_chi(eo, ee, mu).unwrap()).into_quartic();
        let p = uniaxial_quartic(eo, ee, mu).unwrap();
        for _ in 0..200 {
            let q: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let want = -p.eval(&q) / (mu * mu);
            assert!((g.eval(&q) - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn fresnel_is_fully_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let g = fresnel_tensor(&assemble_chi(&random_blocks(&mut rng))).into_quartic();
    assert!(g.max_asymmetry() <= 1e-13 * g.max_abs());
    let dense = g.dense();
    let q = [0.3, -1.0, 0.7, 0.2];
    assert!((eval_dense(dense, &q) - g.eval(&q)).abs() < 1e-12);
}

#[test]
fn zero_medium_has_zero_fresnel_tensor() {
    let g = fresnel_tensor(&ConstitutiveTensor::zero()).into_quartic();
    assert_eq!(g, SymQuartic::zero(4).unwrap());
}

#[test]
fn cross_sections_match_reference_forms() {
    let (eo, ee, mu) = (2.0_f64, 3.0_f64, 1.3_f64);
    let q = uniaxial_quartic(eo, ee, mu).unwrap();
    let k = ee / eo;
    let c = (eo * mu).sqrt();
    let ll = Preset::Ll(k).quartic().unwrap();
    let eek = Preset::Ee(k).quartic().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..100 {
        let (x, y): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + b.abs());
        let s1 = cross_section(&q, (0, 3)).unwrap().eval(&[x, y]);
        assert!(close(s1, ee * (eo * mu * x * x - y * y).powi(2)));
        let s2 = cross_section(&q, (0, 1)).unwrap().eval(&[x, y]);
        assert!(close(s2, eo * ll.eval(&[y, c * x])));
        let s3 = cross_section(&q, (1, 2)).unwrap().eval(&[x, y]);
        assert!(close(s3, eo * (x * x + y * y).powi(2)));
        let s4 = cross_section(&q, (1, 3)).unwrap().eval(&[x, y]);
        assert!(close(s4, eo * eek.eval(&[x, y])));
    }
}

#[test]
fn block_json_input() {
    let text = r#"{"eps": [[2,0,0],[0,2,0],[0,0,3]], "pi": [[1,0,0],[0,1,0],[0,0,1]]}"#;
    let blocks: BlockView = serde_json::from_str(text).unwrap();
    assert_eq!(blocks.gamma, [[0.0; 3]; 3]);
    assert_eq!(assemble_chi(&blocks), uniaxial_chi(2.0, 3.0, 1.0).unwrap());
}
