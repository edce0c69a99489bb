use ppa_reductions::instances::{HamSandwichInstance, Hyperplane, NecklaceInstance, OnPlane};
use ppa_reductions::oracles::{
    brute_force_ham_sandwich, brute_force_necklace, verify_ham_sandwich, verify_necklace, HamBounds,
};
use ppa_reductions::rational::{int, q, Rational};
use ppa_reductions::sandwich::*;
use proptest::prelude::*;

fn two_colour_necklaces(max_len: usize) -> Vec<NecklaceInstance> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for mask in 0u32..(1 << len) {
            let beads: Vec<u32> = (0..len).map(|j| 1 + (mask >> j & 1)).collect();
            if let Ok(inst) = NecklaceInstance::new(beads, 2, 2) {
                out.push(inst);
            }
        }
    }
    out
}

fn pt(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn moment_curve_round_trip_small() {
    let all = two_colour_necklaces(8);
    assert_eq!(all.len(), 2 + 8 + 32 + 128);
    for inst in all {
        let (dhs, emb) = necklace_to_sandwich(&inst).unwrap();
        let sol = brute_force_ham_sandwich(&dhs, HamBounds::default()).unwrap();
        assert!(verify_ham_sandwich(&dhs, &sol.hyperplane, &sol.on_plane).unwrap());
        let split = sandwich_to_necklace_solution(&emb, &sol.hyperplane, &sol.on_plane).unwrap();
        assert!(split.cut_positions.len() <= 2);
        assert!(verify_necklace(&inst, &split).unwrap(), "{:?} -> {:?}", inst.beads, split);
    }
}

#[test]
fn embedding_of_four_beads() {
    let inst = NecklaceInstance::new(vec![1, 2, 2, 1], 2, 2).unwrap();
    let (dhs, _) = necklace_to_sandwich(&inst).unwrap();
    assert_eq!(dhs.point_sets[0][0], vec![q(1, 5), q(1, 25)]);
    assert_eq!(dhs.point_sets[1][0], vec![q(2, 5), q(4, 25)]);
}

#[test]
fn necklace_to_sandwich_positions_follow_formula() {
    // "1 2" is not a valid two-thief instance, but the placement rule still gives j/3
    let inst = NecklaceInstance { beads: vec![1, 2], thieves: 2, colours: 2 };
    assert!(necklace_to_sandwich(&inst).is_err());
    let inst = NecklaceInstance { beads: vec![1, 2, 1, 2], thieves: 2, colours: 2 };
    let (_, emb) = necklace_to_sandwich(&inst).unwrap();
    assert_eq!(emb.bead_positions, vec![q(1, 5), q(2, 5), q(3, 5), q(4, 5)]);
}

#[test]
fn verify_necklace_examples() {
    let inst = NecklaceInstance::parse("1 2 2 1", 2).unwrap();
    // pieces {1}, {2 2}, {1}: thief 0 would hold both beads of colour 1
    let split = ppa_reductions::instances::NecklaceSplit { cut_positions: vec![1, 3], piece_owner: vec![0, 1, 0] };
    assert!(!verify_necklace(&inst, &split).unwrap());
    let split = ppa_reductions::instances::NecklaceSplit { cut_positions: vec![2], piece_owner: vec![0, 1] };
    assert!(verify_necklace(&inst, &split).unwrap());
    assert_eq!(brute_force_necklace(&inst, 24).unwrap().unwrap(), split);
    let inst = NecklaceInstance::parse("1 1", 2).unwrap();
    let none = ppa_reductions::instances::NecklaceSplit { cut_positions: vec![], piece_owner: vec![0] };
    assert!(!verify_necklace(&inst, &none).unwrap());
    let mid = ppa_reductions::instances::NecklaceSplit { cut_positions: vec![1], piece_owner: vec![0, 1] };
    assert!(verify_necklace(&inst, &mid).unwrap());
    let bad = ppa_reductions::instances::NecklaceSplit { cut_positions: vec![1], piece_owner: vec![0] };
    assert!(verify_necklace(&inst, &bad).is_err());
}

#[test]
fn brute_force_necklace_matches_exhaustive_owner_search() {
    for inst in two_colour_necklaces(8) {
        let got = brute_force_necklace(&inst, 24).unwrap().expect("two-thief splits always exist");
        assert!(verify_necklace(&inst, &got).unwrap());
        // independent oracle: any alternating assignment with <= 2 cuts
        let b = inst.beads.len();
        let mut best: Option<Vec<usize>> = None;
        for c1 in 0..b {
            for c2 in c1..b {
                let cuts: Vec<usize> = [c1, c2]
                    .into_iter()
                    .filter(|&c| c > 0)
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let owners: Vec<u32> = (0..b).map(|j| cuts.iter().filter(|&&c| c <= j).count() as u32 % 2).collect();
                let held: usize = (0..b).filter(|&j| owners[j] == 0 && inst.beads[j] == 1).count();
                let held2: usize = (0..b).filter(|&j| owners[j] == 0 && inst.beads[j] == 2).count();
                let c = inst.colour_counts();
                if held * 2 == c[0] && held2 * 2 == c[1] && best.as_ref().is_none_or(|x| cuts < *x) {
                    best = Some(cuts);
                }
            }
        }
        assert_eq!(Some(got.cut_positions), best, "{:?}", inst.beads);
    }
}

#[test]
fn ham_sandwich_one_dim_midpoint() {
    let inst = HamSandwichInstance::new(1, vec![vec![pt(&[0]), pt(&[2])]]).unwrap();
    let sol = brute_force_ham_sandwich(&inst, HamBounds::default()).unwrap();
    assert_eq!(sol.hyperplane.offset, int(1));
    let h = Hyperplane::new(vec![int(1)], int(1)).unwrap();
    assert!(verify_ham_sandwich(&inst, &h, &[]).unwrap());
}

#[test]
fn ham_sandwich_on_plane_either_side() {
    let inst = HamSandwichInstance::new(1, vec![vec![pt(&[0]), pt(&[1]), pt(&[2])]]).unwrap();
    let h = Hyperplane::new(vec![int(1)], int(1)).unwrap();
    for positive in [true, false] {
        assert!(verify_ham_sandwich(&inst, &h, &[OnPlane { set: 0, index: 1, positive }]).unwrap());
    }
    assert!(verify_ham_sandwich(&inst, &h, &[]).is_err());
    assert!(verify_ham_sandwich(&inst, &h, &[OnPlane { set: 0, index: 0, positive: true }]).is_err());
}

#[test]
fn ham_sandwich_symmetric_pairs() {
    let inst =
        HamSandwichInstance::new(2, vec![vec![pt(&[1, 2]), pt(&[-1, -2])], vec![pt(&[3, -1]), pt(&[-3, 1])]]).unwrap();
    let sol = brute_force_ham_sandwich(&inst, HamBounds::default()).unwrap();
    assert!(verify_ham_sandwich(&inst, &sol.hyperplane, &sol.on_plane).unwrap());
}

#[test]
fn ham_sandwich_duplicates_and_degenerate() {
    let inst =
        HamSandwichInstance::new(2, vec![vec![pt(&[0, 0]), pt(&[0, 0])], vec![pt(&[0, 0]), pt(&[0, 0])]]).unwrap();
    let sol = brute_force_ham_sandwich(&inst, HamBounds::default()).unwrap();
    assert!(verify_ham_sandwich(&inst, &sol.hyperplane, &sol.on_plane).unwrap());
    let inst = HamSandwichInstance::new(2, vec![vec![], vec![]]).unwrap();
    assert!(brute_force_ham_sandwich(&inst, HamBounds::default()).is_ok());
}

#[test]
fn bisecting_offset_examples() {
    let inst = HamSandwichInstance::new(1, vec![vec![pt(&[0]), pt(&[2])]]).unwrap();
    assert_eq!(find_bisecting_offset(&inst, &[int(1)]).unwrap(), int(1));
    let inst = HamSandwichInstance::new(1, vec![vec![pt(&[0]), pt(&[5]), pt(&[2])]]).unwrap();
    assert_eq!(find_bisecting_offset(&inst, &[int(1)]).unwrap(), int(2));
}

#[test]
fn label_picks_most_uneven_set() {
    // set 1 entirely above the union's median along x, set 2 entirely below
    let inst =
        HamSandwichInstance::new(2, vec![vec![pt(&[5, 0]), pt(&[6, 0])], vec![pt(&[-5, 0]), pt(&[-6, 0])]]).unwrap();
    assert_eq!(candidate_hyperplane_label(&inst, &[int(1), int(0)], 64).unwrap(), 1);
    assert_eq!(candidate_hyperplane_label(&inst, &[int(-1), int(0)], 64).unwrap(), -1);
}

#[test]
fn label_on_exact_cut_uses_reference_side() {
    let inst =
        HamSandwichInstance::new(2, vec![vec![pt(&[1, 0]), pt(&[-1, 0])], vec![pt(&[2, 0]), pt(&[-2, 0])]]).unwrap();
    let g = [int(1), int(0)];
    assert_eq!(find_bisecting_offset(&inst, &g).unwrap(), int(0));
    // reference point (1/128, 1) lies on the positive side of x = 0
    assert_eq!(candidate_hyperplane_label(&inst, &g, 64).unwrap(), 1);
    assert_eq!(candidate_hyperplane_label(&inst, &[int(-1), int(0)], 64).unwrap(), -1);
}

#[test]
fn power_of_two_examples() {
    let solver = |i: &NecklaceInstance| brute_force_necklace(i, 24);
    let inst = NecklaceInstance::parse("1 1 1 1", 4).unwrap();
    let s = solve_power_of_two(&inst, &solver).unwrap();
    assert_eq!(s.cut_positions.len(), 3);
    assert!(verify_necklace(&inst, &s).unwrap());
    let inst = NecklaceInstance::parse("1 2 1 1 2 2 1 2", 4).unwrap();
    let s = solve_power_of_two(&inst, &solver).unwrap();
    assert!(s.cut_positions.len() <= 6);
    assert!(verify_necklace(&inst, &s).unwrap());
    let inst = NecklaceInstance::parse("1 2 2 1", 2).unwrap();
    assert_eq!(solve_power_of_two(&inst, &solver).unwrap(), brute_force_necklace(&inst, 24).unwrap().unwrap());
}

fn gradient(raw: &[i64]) -> Option<Vec<Rational>> {
    let l1: i64 = raw.iter().map(|x| x.abs()).sum();
    (l1 != 0).then(|| raw.iter().map(|&x| q(x, l1)).collect())
}

proptest! {
    #[test]
    fn label_is_antipodal(
        pts in proptest::collection::vec((-20i64..20, -20i64..20), 2..12),
        g in (-64i64..=64, -64i64..=64),
    ) {
        let half = pts.len() / 2;
        let sets = vec![
            pts[..half].iter().map(|&(a, b)| pt(&[a, b])).collect(),
            pts[half..].iter().map(|&(a, b)| pt(&[a, b])).collect(),
        ];
        let inst = HamSandwichInstance::new(2, sets).unwrap();
        if let Some(g) = gradient(&[g.0, g.1]) {
            let neg: Vec<Rational> = g.iter().map(|x| -x).collect();
            match (candidate_hyperplane_label(&inst, &g, 64), candidate_hyperplane_label(&inst, &neg, 64)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, -b),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "asymmetric failure {:?}", other),
            }
        }
    }

    #[test]
    fn power_of_two_respects_bound(mask in 0u32..(1 << 16), len in 1usize..=4) {
        // len*4 beads, colour counts forced to multiples of 4
        let b = 4 * len;
        let mut beads: Vec<u32> = (0..b).map(|j| 1 + (mask >> j & 1)).collect();
        let ones = beads.iter().filter(|&&x| x == 1).count();
        for j in 0..(ones % 4) {
            let pos = beads.iter().position(|&x| x == 1).unwrap();
            let _ = j;
            beads[pos] = 2;
        }
        let inst = NecklaceInstance::new(beads, 4, 2).unwrap();
        let solver = |i: &NecklaceInstance| brute_force_necklace(i, 24);
        let s = solve_power_of_two(&inst, &solver).unwrap();
        prop_assert!(s.cut_positions.len() <= 6);
        prop_assert!(verify_necklace(&inst, &s).unwrap());
    }
}
