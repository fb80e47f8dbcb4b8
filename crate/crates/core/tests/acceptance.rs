//! One test per acceptance criterion; each prints its PASS/FAIL line.

use qaw_core::harness::{criteria, run};

fn criterion(id: u8) {
    let c = criteria().iter().find(|c| c.id == id).unwrap();
    let outcome = run(c);
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn c01_square_words() {
    criterion(1);
}

#[test]
fn c02_anbncn() {
    criterion(2);
}

#[test]
fn c03_fifo() {
    criterion(3);
}

#[test]
fn c04_any_trigger_elimination() {
    criterion(4);
}

#[test]
fn c05_normalization() {
    criterion(5);
}

#[test]
fn c06_two_queue_merge() {
    criterion(6);
}

#[test]
fn c07_rtm_translations() {
    criterion(7);
}

#[test]
fn c08_negative_control() {
    criterion(8);
}

#[test]
fn c09_function_computation() {
    criterion(9);
}

#[test]
fn c10_queue_specification() {
    criterion(10);
}

#[test]
fn c11_decomposition() {
    criterion(11);
}

#[test]
fn c12_engine_self_check() {
    criterion(12);
}

#[test]
fn c13_unbounded_runs() {
    criterion(13);
}
