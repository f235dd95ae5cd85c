use num_traits::{Signed, Zero};

use uso_core::linalg::{integer, rational, Rational, RationalMatrix};
use uso_core::matroid::{all_circuits, circuit_axioms_hold};
use uso_core::plcp::feasible_bases;
use uso_core::{
    build_matousek, canonicalize, extension_to_uso, fundamental_circuit, g_pi, global_sink,
    is_p_matroid, is_uso, plcp_to_uso, realization_matrix, synthesize_extension,
    translate_to_plcp, validate_conditions, verify_circuit_axioms, Branching, CyclicExtension,
    SignedSet,
};

/// Signs of the kernel vector of `n + 1` columns of an `n`-row matrix, by
/// Cramer's rule: `x_k = (-1)^k det(columns without k)`.
fn kernel_signs(v: &RationalMatrix, cols: &[usize]) -> Vec<i8> {
    (0..cols.len())
        .map(|k| {
            let rest: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &c)| c)
                .collect();
            let det = v.select_columns(&rest).determinant().unwrap();
            let x = if k % 2 == 0 { det } else { -det };
            assert!(!x.is_zero(), "moment-curve columns are in general position");
            if x.is_positive() { 1 } else { -1 }
        })
        .collect()
}

/// Compares the read-off circuit on every `(n + 1)`-support against the
/// kernel of the corresponding columns of `v` (column `e - 1` is element `e`).
fn assert_matrix_realizes(ext: &CyclicExtension, v: &RationalMatrix) {
    let size = 2 * ext.n() + 1;
    for support in 0u64..1 << size {
        if support.count_ones() as usize != ext.n() + 1 {
            continue;
        }
        let elems: Vec<usize> = (1..=size).filter(|e| support >> (e - 1) & 1 == 1).collect();
        let cols: Vec<usize> = elems.iter().map(|e| e - 1).collect();
        let mut signs = kernel_signs(v, &cols);
        let (first, basis) = elems.split_first().unwrap();
        if signs[0] < 0 {
            signs.iter_mut().for_each(|s| *s = -*s);
        }
        let c = fundamental_circuit(ext, basis, *first).unwrap();
        let read: Vec<i8> = elems.iter().map(|&e| c.sign(e)).collect();
        assert_eq!(read, signs, "{ext:?} support {elems:?}");
    }
}

fn valid_extensions(n: usize) -> Vec<CyclicExtension> {
    // all orderings of the 2n ground elements with q last, all sign sets
    let ground: Vec<usize> = (1..=2 * n).collect();
    let mut out = Vec::new();
    permutations(&ground, &mut |perm| {
        for f in 0u32..1 << (2 * n) {
            let flipped = (1..=2 * n).filter(|e| f >> (e - 1) & 1 == 1);
            let ext = CyclicExtension::with_q_last(n, perm, flipped).unwrap();
            if validate_conditions(&ext) {
                out.push(ext);
            }
        }
    });
    out
}

fn permutations(items: &[usize], visit: &mut dyn FnMut(&[usize])) {
    fn rec(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, visit);
            items.swap(k, i);
        }
    }
    rec(&mut items.to_vec(), 0, visit);
}

#[test]
fn reading_off_matches_moment_curve_kernels() {
    for n in 1..=3 {
        for b in Branching::enumerate(n).unwrap() {
            let ext = synthesize_extension(&b);
            let v = realization_matrix(&ext, None).unwrap();
            assert_matrix_realizes(&ext, &v);
            // q anywhere in the order
            for pos in 1..=2 * n + 1 {
                let moved = ext.with_q_at(pos).unwrap();
                assert_matrix_realizes(&moved, &realization_matrix(&moved, None).unwrap());
            }
        }
    }
}

#[test]
fn translated_instance_keeps_the_matroid() {
    // [I  -M  -q] realizes the same oriented matroid as V
    for n in 1..=3 {
        for b in Branching::enumerate(n).unwrap() {
            let ext = synthesize_extension(&b);
            let inst = translate_to_plcp(&realization_matrix(&ext, None).unwrap()).unwrap();
            let mut w = RationalMatrix::zeros(n, 2 * n + 1);
            for i in 0..n {
                w[(i, i)] = integer(1);
                for j in 0..n {
                    w[(i, n + j)] = -inst.m()[(i, j)].clone();
                }
                w[(i, 2 * n)] = -inst.q()[i].clone();
            }
            assert_matrix_realizes(&ext, &w);
        }
    }
}

#[test]
fn two_roots_circuit_by_hand() {
    let ext = synthesize_extension(&Branching::roots_only(2).unwrap());
    // order 1, 3, 2, 4, q with F = {3, 4}; basis {1, 2}:
    // support by position is 1, 2, q → +, -, + before flips; none flipped
    let c = fundamental_circuit(&ext, &[1, 2], 5).unwrap();
    assert_eq!(c, SignedSet::from_elements(&[1, 5], &[2]));
    // basis {3, 4}: 3, 4, q → +, -, + then flip 3 and 4 → -, +, +
    let c = fundamental_circuit(&ext, &[3, 4], 5).unwrap();
    assert_eq!(c, SignedSet::from_elements(&[4, 5], &[3]));
}

#[test]
fn p_matroid_theorem_small_exhaustive() {
    for n in 1..=2 {
        let ground: Vec<usize> = (1..=2 * n).collect();
        permutations(&ground, &mut |perm| {
            for f in 0u32..1 << (2 * n) {
                let flipped = (1..=2 * n).filter(|e| f >> (e - 1) & 1 == 1);
                let ext = CyclicExtension::with_q_last(n, perm, flipped).unwrap();
                assert_eq!(is_p_matroid(&ext).unwrap(), validate_conditions(&ext), "{ext:?}");
            }
        });
    }
}

#[test]
fn valid_extensions_satisfy_circuit_axioms() {
    for n in 1..=2 {
        for ext in valid_extensions(n) {
            assert!(verify_circuit_axioms(&ext).unwrap());
        }
    }
    for b in Branching::enumerate(3).unwrap() {
        let ext = synthesize_extension(&b);
        assert!(verify_circuit_axioms(&ext).unwrap());
        assert!(verify_circuit_axioms(&ext.with_q_at(1).unwrap()).unwrap());
    }
}

#[test]
fn corrupted_circuit_lists_fail() {
    let ext = synthesize_extension(&Branching::path(2).unwrap());
    let circuits = all_circuits(&ext);
    assert!(circuit_axioms_hold(&circuits));
    for i in 0..circuits.len() {
        let mut bad = circuits.clone();
        let e = bad[i].support().trailing_zeros() as usize + 1;
        bad[i] = bad[i].with_flipped(e);
        assert!(!circuit_axioms_hold(&bad));
    }
}

#[test]
fn synthesized_nesting_is_branching_closure() {
    for n in 1..=4 {
        for b in Branching::enumerate(n).unwrap() {
            let ext = synthesize_extension(&b);
            assert!(validate_conditions(&ext));
            assert!(is_p_matroid(&ext).unwrap());
            assert_eq!(g_pi(&ext).unwrap(), b.transitive_closure(), "{b:?}");
        }
    }
}

#[test]
fn extension_orientations_are_usos() {
    for n in 1..=3 {
        for ext in valid_extensions(n) {
            for pos in [1, n + 1, 2 * n + 1] {
                let moved = ext.with_q_at(pos).unwrap();
                assert!(is_uso(&extension_to_uso(&moved).unwrap()).unwrap(), "{moved:?}");
            }
        }
    }
}

#[test]
fn q_last_gives_matousek_uso_of_nesting_graph() {
    for n in 1..=3 {
        for ext in valid_extensions(n) {
            let u = extension_to_uso(&ext).unwrap();
            assert_eq!(canonicalize(&u).unwrap(), build_matousek(&g_pi(&ext).unwrap()));
        }
    }
}

#[test]
fn plcp_orientation_equals_extension_orientation() {
    for n in 1..=4 {
        for b in Branching::enumerate(n).unwrap() {
            let ext = synthesize_extension(&b);
            let inst = translate_to_plcp(&realization_matrix(&ext, None).unwrap()).unwrap();
            let via_plcp = plcp_to_uso(&inst).unwrap();
            assert_eq!(via_plcp, extension_to_uso(&ext).unwrap());
            // exactly one complementary non-negative solution, at the sink
            assert_eq!(feasible_bases(&inst).unwrap(), vec![global_sink(&via_plcp).unwrap()]);
        }
    }
}

#[test]
fn plcp_orientation_with_q_in_the_middle() {
    for b in Branching::enumerate(3).unwrap() {
        let ext = synthesize_extension(&b);
        for pos in 1..=7 {
            let moved = ext.with_q_at(pos).unwrap();
            let inst = translate_to_plcp(&realization_matrix(&moved, None).unwrap()).unwrap();
            assert_eq!(plcp_to_uso(&inst).unwrap(), extension_to_uso(&moved).unwrap());
        }
    }
}

#[test]
fn other_increasing_abscissae_give_the_same_orientation() {
    // a fixed irregular increasing sequence of rationals
    let xs: Vec<Rational> = [(-7, 2), (-1, 3), (0, 1), (1, 5), (2, 3), (5, 4), (9, 2), (11, 1), (40, 3)]
        .iter()
        .map(|&(a, b)| rational(a, b))
        .collect();
    for b in Branching::enumerate(4).unwrap() {
        let ext = synthesize_extension(&b);
        let inst = translate_to_plcp(&realization_matrix(&ext, Some(&xs)).unwrap()).unwrap();
        assert_eq!(plcp_to_uso(&inst).unwrap(), extension_to_uso(&ext).unwrap());
    }
}
