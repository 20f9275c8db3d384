use std::fs;

use ybe_core::census::{
    enumerate, enumerate_block_form, naive_enumerate, read_jsonl, run, write_jsonl, CensusError, CensusRecord,
    CensusRun, CensusSpec, Constraint,
};
use ybe_core::families::{fixture, p2_solution, permutation_solution};
use ybe_core::quotients::canonical_form;
use ybe_core::{Perm, Solution};

fn keys(r: &[CensusRecord]) -> Vec<Vec<Vec<usize>>> {
    r.iter().map(|x| x.key.clone()).collect()
}

fn jsonl(r: &[CensusRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    write_jsonl(r, &mut out).unwrap();
    out
}

#[test]
fn class_counts() {
    for (n, want) in [(1, 1), (2, 2), (3, 5), (4, 23), (5, 88), (6, 595)] {
        let r = enumerate(&CensusSpec::new(n)).unwrap();
        assert_eq!(r.len(), want, "n={n}");
        assert!(r.windows(2).all(|w| w[0].key < w[1].key));
    }
}

#[test]
fn order_two() {
    let r = enumerate(&CensusSpec::new(2)).unwrap();
    let trivial = Solution::from_perms(vec![Perm::identity(2); 2]).unwrap();
    let swap = permutation_solution(&Perm::shift(2));
    let mut want = vec![canonical_form(&trivial), canonical_form(&swap)];
    want.sort();
    assert_eq!(keys(&r), want);
}

#[test]
fn order_three_indecomposable() {
    let r = enumerate(&CensusSpec::new(3).with_constraints(&[Constraint::Indecomposable])).unwrap();
    assert_eq!(keys(&r), vec![canonical_form(&permutation_solution(&Perm::shift(3)))]);
}

#[test]
fn order_four_indecomposable_irretractable() {
    let spec = CensusSpec::new(4).with_constraints(&[Constraint::Indecomposable, Constraint::Irretractable]);
    let r = enumerate(&spec).unwrap();
    let mut want: Vec<_> = ["examp1", "examp2"].iter().map(|f| canonical_form(&fixture(f).unwrap())).collect();
    want.sort();
    assert_eq!(keys(&r), want);
    assert!(r.iter().all(|x| x.flags.simple));
}

#[test]
fn naive_cross_check() {
    for n in 1..=4 {
        let fast = keys(&enumerate(&CensusSpec::new(n)).unwrap());
        assert_eq!(fast, naive_enumerate(n), "n={n}");
    }
}

#[test]
fn flag_implications() {
    for n in 2..=6 {
        for r in enumerate(&CensusSpec::new(n)).unwrap() {
            let s = r.solution();
            assert_eq!(canonical_form(&s), r.key);
            if r.flags.simple && ![2, 3, 5].contains(&n) {
                assert!(r.flags.indecomposable && r.flags.irretractable, "{:?}", r.key);
            }
            if r.flags.square_free {
                assert!(!r.flags.indecomposable, "{:?}", r.key);
            }
        }
    }
}

#[test]
fn constraints_filter() {
    let all = enumerate(&CensusSpec::new(5)).unwrap();
    for c in [Constraint::Indecomposable, Constraint::Irretractable, Constraint::SquareFree, Constraint::Simple] {
        let got = enumerate(&CensusSpec::new(5).with_constraints(&[c])).unwrap();
        let want: Vec<_> = all
            .iter()
            .filter(|r| match c {
                Constraint::Indecomposable => r.flags.indecomposable,
                Constraint::Irretractable => r.flags.irretractable,
                Constraint::SquareFree => r.flags.square_free,
                _ => r.flags.simple,
            })
            .cloned()
            .collect();
        assert_eq!(got, want, "{c}");
    }
}

#[test]
fn parallel_matches_single_worker() {
    let mut one = CensusSpec::new(5);
    one.jobs = 1;
    let mut four = CensusSpec::new(5);
    four.jobs = 4;
    four.chunk = 3;
    assert_eq!(jsonl(&enumerate(&one).unwrap()), jsonl(&enumerate(&four).unwrap()));
}

#[test]
fn resume_at_every_boundary() {
    let dir = std::env::temp_dir().join(format!("ybe-census-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let base = CensusSpec::new(4);
    let want = jsonl(&enumerate(&base).unwrap());
    for depth in 1..=4 {
        let path = dir.join(format!("cp{depth}.json"));
        let mut stop = 0;
        loop {
            let _ = fs::remove_file(&path);
            let mut spec = base.clone();
            spec.split_depth = depth;
            spec.chunk = 1;
            spec.checkpoint = Some(path.clone());
            spec.stop_after = Some(stop);
            let total = match run(&spec).unwrap() {
                CensusRun::Interrupted { total_items, .. } => total_items,
                CensusRun::Complete(r) => {
                    assert_eq!(jsonl(&r), want);
                    break;
                }
            };
            spec.stop_after = None;
            assert_eq!(jsonl(&enumerate(&spec).unwrap()), want, "depth={depth} stop={stop}/{total}");
            stop += 1;
        }
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn checkpoint_errors() {
    let dir = std::env::temp_dir().join(format!("ybe-census-err-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cp.json");

    fs::write(&path, "").unwrap();
    let mut spec = CensusSpec::new(4);
    spec.checkpoint = Some(path.clone());
    assert_eq!(enumerate(&spec).unwrap(), enumerate(&CensusSpec::new(4)).unwrap());

    let mut other = spec.clone().with_constraints(&[Constraint::Indecomposable]);
    other.checkpoint = Some(path.clone());
    assert_eq!(enumerate(&other), Err(CensusError::SpecMismatch));
    let mut deeper = spec.clone();
    deeper.split_depth = 3;
    assert_eq!(enumerate(&deeper), Err(CensusError::SpecMismatch));

    let text = fs::read_to_string(&path).unwrap().replacen("\"version\":1", "\"version\":99", 1);
    fs::write(&path, text).unwrap();
    assert!(matches!(enumerate(&spec), Err(CensusError::Version { found: 99, .. })));

    fs::write(&path, "{not json").unwrap();
    assert!(matches!(enumerate(&spec), Err(CensusError::Checkpoint(_))));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn jsonl_round_trip() {
    let r = enumerate(&CensusSpec::new(3)).unwrap();
    let bytes = jsonl(&r);
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("{\"key\":")));
    assert_eq!(read_jsonl(&text).unwrap(), r);
}

#[test]
fn block_form_classes() {
    let two = enumerate_block_form(2).unwrap();
    let mut want: Vec<_> = ["examp1", "examp2"].iter().map(|f| canonical_form(&fixture(f).unwrap())).collect();
    want.sort();
    assert_eq!(keys(&two), want);

    let three = enumerate_block_form(3).unwrap();
    let mut want: Vec<_> =
        ["nine_r1", "nine_r2", "nine_r3"].iter().map(|f| canonical_form(&fixture(f).unwrap())).collect();
    want.sort();
    assert_eq!(keys(&three), want);

    for (p, recs) in [(2, &two), (3, &three)] {
        for r in recs.iter() {
            assert!(r.flags.simple && r.flags.indecomposable && r.flags.irretractable);
            let q = r.params.as_ref().expect("annotated");
            assert_eq!(canonical_form(&p2_solution(p, q.t, &q.j).unwrap()), r.key);
        }
    }
    let via_spec = enumerate(&CensusSpec::new(9).with_constraints(&[Constraint::BlockForm(3)])).unwrap();
    assert_eq!(via_spec, three);
}

#[test]
fn infeasible() {
    assert!(matches!(enumerate(&CensusSpec::new(8)), Err(CensusError::Infeasible(_))));
    assert!(matches!(enumerate_block_form(5), Err(CensusError::Infeasible(_))));
    let bad = CensusSpec::new(6).with_constraints(&[Constraint::BlockForm(2)]);
    assert!(matches!(enumerate(&bad), Err(CensusError::Infeasible(_))));
}
