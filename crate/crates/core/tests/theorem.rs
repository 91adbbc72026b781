use dlcusp::groups::{Bounds, GroupKind, Seed};
use dlcusp::multiplicity::{self, TheoremRow};
use dlcusp::Exec;

fn run(kind: GroupKind, q: u64, seed: Seed) -> (usize, Vec<TheoremRow>) {
    let (setup, rows) = multiplicity::run(kind, q, seed, &Bounds::default(), Exec::default()).unwrap();
    (setup.census().len(), rows.into_iter().map(|r| r.unwrap()).collect())
}

fn rows(kind: GroupKind, q: u64, seed: Seed) -> Vec<TheoremRow> {
    run(kind, q, seed).1
}

#[test]
fn gl2_named_seeds() {
    for q in [3, 5, 7] {
        for seed in [Seed::Diag, Seed::Antidiag, Seed::TransposeInverse] {
            let (n, rows) = run(GroupKind::Gl2, q, seed);
            assert_eq!(rows.len() as u64, (q * q - q) / 2);
            for r in &rows {
                assert_eq!(r.lhs, r.rhs, "q={q} {seed:?} {:?}", r.pairs);
                assert_eq!(r.lhs_samples.len(), n.min(4));
            }
            eprintln!("q={q} {:?} |Θ|={n}: {:?}", seed, rows.iter().map(|r| r.lhs).collect::<Vec<_>>());
        }
    }
}

#[test]
fn gl2_diag_q3_pattern() {
    let rows = rows(GroupKind::Gl2, 3, Seed::Diag);
    let got: Vec<(Vec<[u64; 2]>, u64)> = rows.iter().map(|r| (r.pairs.clone(), r.lhs)).collect();
    assert_eq!(got, vec![(vec![[2, 6]], 1), (vec![[1, 3]], 0), (vec![[5, 7]], 0)]);
}

#[test]
fn gl2_x_gl2_swap_is_orthogonality() {
    let rows = rows(GroupKind::Gl2XGl2, 3, Seed::Swap);
    assert_eq!(rows.len(), 9);
    for (n, r) in rows.iter().enumerate() {
        let expect = u64::from(n / 3 == n % 3);
        assert_eq!((r.lhs, r.rhs), (expect, expect), "{:?}", r.pairs);
    }
}

#[test]
fn central_compatibility() {
    for q in [3, 5] {
        for seed in [Seed::Diag, Seed::TransposeInverse] {
            let (setup, rows) = multiplicity::run(GroupKind::Gl2, q, seed, &Bounds::default(), Exec::Sequential).unwrap();
            let ext = setup.group().ext();
            let center = setup.group().center();
            let fixed = setup.census().fixed_points(0);
            for r in rows {
                let r = r.unwrap();
                let k = r.lambda_exponents[0];
                let lam = dlcusp::gf::TorusCharacter::new(setup.group().tower(), 2, k as i64).unwrap();
                let nontrivial = center.iter().filter(|z| fixed.contains(z)).any(|z| {
                    let u = setup.group().tower().embed(z.0[0].get(0, 0), 2).unwrap();
                    (lam.eval_in(ext, u) - 1.0).norm() > 1e-9
                });
                if nontrivial {
                    assert_eq!(r.lhs, 0);
                }
            }
        }
    }
}
