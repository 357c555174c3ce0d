use std::collections::{BTreeSet, VecDeque};
use std::time::Duration;

use dagqr::graph::{build_task_graph, TaskGraph};
use dagqr::sched::{execute, run_barrier, run_lockfree, run_priority, run_sequential, ExecOptions, ExecReport, SchedulerKind};
use dagqr::{gen_matrix, TaskId, sequential_factorize, DenseMatrix, Matrix, ReflectorStore, ScheduleError, Store};
use proptest::prelude::*;

fn reference(a: &Matrix) -> (Matrix, Store) {
    let mut m = a.clone();
    let s = sequential_factorize(&mut m);
    (m, s)
}

fn run(kind: SchedulerKind, g: &TaskGraph, a: &Matrix, threads: usize) -> (Matrix, Store, ExecReport) {
    let mut m = a.clone();
    let mut s = ReflectorStore::new(m.pivot_count());
    let r = execute(kind, g, &mut m, &mut s, threads, &ExecOptions::default()).unwrap();
    (m, s, r)
}

fn assert_bitwise(kind: SchedulerKind, a: &Matrix, alpha: usize, beta: usize, threads: usize) {
    let (rm, rs) = reference(a);
    let g = build_task_graph(a.nrows(), a.ncols(), alpha, beta).unwrap();
    let (m, s, report) = run(kind, &g, a, threads);
    assert_eq!(
        m.first_bit_mismatch(&rm),
        None,
        "{kind} {}x{} a={alpha} b={beta} t={threads}",
        a.nrows(),
        a.ncols()
    );
    assert_eq!(s.first_mismatch(&rs), None, "{kind} store");
    assert_eq!(report.executed, g.len());
    assert!(report.flag_sets.iter().all(|&c| c == 1));
}

#[test]
fn sequential_matches_reference_on_grid() {
    for size in [1, 2, 5, 16, 33] {
        for (a, b) in [(1, 1), (2, 3), (3, 2), (5, 5), (12, 12), (40, 1)] {
            let m = gen_matrix(size, size, (size * 31 + a) as u64);
            assert_bitwise(SchedulerKind::Sequential, &m, a, b, 1);
        }
    }
}

#[test]
fn parallel_three_hundred() {
    let a = gen_matrix(300, 300, 2);
    for kind in SchedulerKind::PARALLEL {
        for threads in [1, 2, 4, 8] {
            assert_bitwise(kind, &a, 12, 12, threads);
        }
    }
}

#[test]
fn rectangular_inputs() {
    for (m, n) in [(17, 9), (9, 17), (1, 5), (5, 1)] {
        let a = gen_matrix(m, n, 77);
        for kind in SchedulerKind::ALL {
            assert_bitwise(kind, &a, 3, 4, 3);
        }
    }
}

#[test]
fn degenerate_columns_are_skipped_consistently() {
    let mut a = gen_matrix(12, 12, 5);
    for r in 0..12 {
        a[(r, 0)] = 0.0;
        a[(r, 5)] = 0.0;
    }
    for r in 0..12 {
        a[(0, r)] = 0.0;
    }
    for kind in SchedulerKind::ALL {
        assert_bitwise(kind, &a, 2, 3, 4);
    }
    let z = DenseMatrix::<f64>::zeros(6, 6);
    for kind in SchedulerKind::ALL {
        assert_bitwise(kind, &z, 2, 2, 2);
    }
}

#[test]
fn single_precision_is_bitwise_too() {
    let a = gen_matrix::<f32>(40, 40, 8);
    let mut rm = a.clone();
    let rs = sequential_factorize(&mut rm);
    let g = build_task_graph(40, 40, 3, 5).unwrap();
    for kind in SchedulerKind::ALL {
        let mut m = a.clone();
        let mut s = ReflectorStore::new(40);
        execute(kind, &g, &mut m, &mut s, 4, &ExecOptions::default()).unwrap();
        assert!(m.bit_eq(&rm) && s.bit_eq(&rs), "{kind}");
    }
}

#[test]
fn sequential_unit_chunks_run_fifteen_tasks() {
    let g = build_task_graph(5, 5, 1, 1).unwrap();
    let (_, _, r) = run(SchedulerKind::Sequential, &g, &gen_matrix(5, 5, 1), 1);
    assert_eq!(r.executed, 15);
    assert_eq!(r.start_order, g.priority_order());
}

#[test]
fn single_node_graph() {
    let g = build_task_graph(4, 4, 4, 4).unwrap();
    let a = gen_matrix(4, 4, 3);
    for kind in SchedulerKind::ALL {
        let (_, _, r) = run(kind, &g, &a, 8);
        assert_eq!(r.executed, 1, "{kind}");
    }
}

#[test]
fn barrier_rendezvous_count() {
    let g = build_task_graph(5, 5, 1, 1).unwrap();
    let (_, _, r) = run(SchedulerKind::Barrier, &g, &gen_matrix(5, 5, 1), 2);
    assert_eq!(r.rendezvous, 10);
    let (_, _, r) = run(SchedulerKind::Barrier, &g, &gen_matrix(5, 5, 1), 1);
    assert_eq!(r.rendezvous, 10);
}

#[test]
fn lockfree_pushes_each_task_once() {
    let g = build_task_graph(5, 5, 1, 1).unwrap();
    let a = gen_matrix(5, 5, 9);
    for _ in 0..20 {
        for kind in [SchedulerKind::LockFree, SchedulerKind::Priority] {
            let (_, _, r) = run(kind, &g, &a, 2);
            assert!(r.main_pushes.iter().all(|&c| c == 1), "{kind}: {:?}", r.main_pushes);
        }
    }
}

#[test]
fn priority_single_thread_follows_critical_chain() {
    let g = build_task_graph(5, 5, 1, 1).unwrap();
    let (_, _, r) = run(SchedulerKind::Priority, &g, &gen_matrix(5, 5, 4), 1);
    let first: Vec<String> = r.start_order[..3].iter().map(|&t| g.node(t).label()).collect();
    // T_{1,1}, T_{1,2}, T_{2,2} in 1-based naming
    assert_eq!(first, ["D0", "T0,1", "D1"]);
}

#[test]
fn priority_single_thread_pops_best_available() {
    // replay one worker's loop: each pop must be the best-ranked task in the main queue
    for (m, a, b) in [(12, 1, 1), (20, 2, 3), (24, 4, 2), (30, 5, 12)] {
        let g = build_task_graph(m, m, a, b).unwrap();
        let (_, _, r) = run(SchedulerKind::Priority, &g, &gen_matrix(m, m, 2), 1);
        let mut done = vec![false; g.len()];
        let mut main: BTreeSet<usize> = BTreeSet::from([g.rank(g.root)]);
        let mut wait: VecDeque<usize> = VecDeque::new();
        let ready = |done: &[bool], i: usize| g.nodes[i].parents.iter().all(|p| done[p.0]);
        let mut executed = 0;
        while executed < g.len() {
            if let Some(best) = main.pop_first() {
                let t = g.priority_order()[best];
                assert_eq!(r.start_order[executed], t, "m={m} a={a} b={b} step {executed}");
                executed += 1;
                done[t.0] = true;
                for &c in &g.node(t).releases {
                    if ready(&done, c.0) {
                        main.insert(g.rank(c));
                    } else {
                        wait.push_back(c.0);
                    }
                }
            }
            if let Some(w) = wait.pop_front() {
                if ready(&done, w) {
                    main.insert(g.rank(TaskId(w)));
                } else {
                    wait.push_back(w);
                }
            }
        }
    }
}

#[test]
fn trace_records_every_task() {
    let g = build_task_graph(16, 16, 2, 2).unwrap();
    let mut m: Matrix = gen_matrix(16, 16, 1);
    let mut s = ReflectorStore::new(16);
    let opts = ExecOptions {
        trace: true,
        ..Default::default()
    };
    let r = run_lockfree(&g, &mut m, &mut s, 3, &opts).unwrap();
    assert_eq!(r.trace.len(), g.len());
    assert!(r.trace.iter().all(|e| e.end_ns >= e.start_ns && e.worker < 3));
    let mut csv = Vec::new();
    dagqr::sched::write_trace_csv(&mut csv, &g, &r.trace).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("worker,task,start_ns,end_ns\n"));
    assert_eq!(text.lines().count(), g.len() + 1);
}

#[test]
fn watchdog_aborts_stuck_run() {
    let mut g = build_task_graph(6, 6, 1, 1).unwrap();
    // drop a releaser designation: that task can never be enqueued
    let d2 = g.diagonal(2);
    let releaser = g.node(d2).releaser.unwrap();
    g.nodes[releaser.0].releases.retain(|&c| c != d2);
    let mut m: Matrix = gen_matrix(6, 6, 1);
    let mut s = ReflectorStore::new(6);
    let opts = ExecOptions {
        watchdog: Duration::from_millis(200),
        trace: false,
    };
    let err = run_lockfree(&g, &mut m, &mut s, 4, &opts).unwrap_err();
    match err {
        ScheduleError::Watchdog { completed, total, dump, .. } => {
            assert!(completed < total);
            assert!(dump.contains("D2"), "{dump}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn shape_mismatch_is_an_error() {
    let g = build_task_graph(4, 4, 1, 1).unwrap();
    let mut m: Matrix = gen_matrix(5, 5, 1);
    let mut s = ReflectorStore::new(5);
    assert!(matches!(
        run_sequential(&g, &mut m, &mut s, &ExecOptions::default()),
        Err(ScheduleError::Graph(_))
    ));
    assert!(run_barrier(&g, &mut m, &mut s, 2, &ExecOptions::default()).is_err());
    assert!(run_priority(&g, &mut m, &mut s, 2, &ExecOptions::default()).is_err());
}

#[test]
fn factorize_convenience() {
    let a = gen_matrix(30, 30, 6);
    let (rm, rs) = reference(&a);
    let mut m = a.clone();
    let cfg = dagqr::SchedulerConfig {
        kind: SchedulerKind::Priority,
        threads: 4,
        alpha: 4,
        beta: 6,
    };
    let s = dagqr::factorize(&mut m, &cfg).unwrap();
    assert!(m.bit_eq(&rm) && s.bit_eq(&rs));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_executor_matches_reference(
        m in 1usize..40,
        n in 1usize..40,
        alpha in 1usize..10,
        beta in 1usize..10,
        threads in 1usize..6,
        seed in any::<u64>(),
        kind in prop::sample::select(SchedulerKind::ALL.to_vec()),
    ) {
        let a = gen_matrix(m, n, seed);
        let (rm, rs) = reference(&a);
        let g = build_task_graph(m, n, alpha, beta).unwrap();
        let (fm, fs, r) = run(kind, &g, &a, threads);
        prop_assert!(fm.bit_eq(&rm));
        prop_assert!(fs.bit_eq(&rs));
        prop_assert_eq!(r.executed, g.len());
        if matches!(kind, SchedulerKind::LockFree | SchedulerKind::Priority) {
            prop_assert!(r.main_pushes.iter().all(|&c| c == 1));
        }
    }
}
