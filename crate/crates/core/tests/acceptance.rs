use indkit::verify::{run_criterion, CRITERIA};

fn check(id: usize) {
    let r = run_criterion(id);
    println!("{}", r.line());
    assert!(r.passed, "criterion {id} ({}) failed: {}", CRITERIA[id - 1], r.detail);
}

#[test]
fn c01_phi_formula() {
    check(1);
}

#[test]
fn c02_y_term_lemma() {
    check(2);
}

#[test]
fn c03_bracket_grading() {
    check(3);
}

#[test]
fn c04_divergence() {
    check(4);
}

#[test]
fn c05_lie_closure() {
    check(5);
}

#[test]
fn c06_jordan_chevalley() {
    check(6);
}

#[test]
fn c07_exp_log() {
    check(7);
}

#[test]
fn c08_jvk() {
    check(8);
}

#[test]
fn c09_s_normal_form() {
    check(9);
}

#[test]
fn c10_degeneration() {
    check(10);
}

#[test]
fn c11_theorem_b() {
    check(11);
}

#[test]
fn c12_sl2_invariance() {
    check(12);
}
