use std::collections::BTreeSet;

use super::reference::ReferenceEngine;
use super::*;
use crate::ontology::{Priority, Rule};

fn lit(s: &str) -> Literal {
    Literal::lit(s)
}

fn program(facts: &[&str], rules: Vec<Rule>, priorities: &[(&str, &str)]) -> DefeasibleProgram {
    DefeasibleProgram::new(
        facts.iter().map(|f| lit(f)),
        rules,
        priorities.iter().map(|(h, l)| Priority::new(*h, *l)),
    )
    .unwrap()
}

fn supports(args: &[Argument]) -> Vec<Vec<&str>> {
    args.iter()
        .map(|a| a.support.iter().map(String::as_str).collect())
        .collect()
}

#[test]
fn fact_is_its_own_argument() {
    let p = program(&["a"], vec![], &[]);
    let args = p.arguments_for(&lit("a"));
    assert_eq!(args.len(), 1);
    assert!(args[0].support.is_empty());
    assert_eq!(args[0].derivation.step, Step::Fact);
}

#[test]
fn single_rule_chain() {
    let p = program(&["a"], vec![Rule::defeasible("r1", &["a"], "b")], &[]);
    let args = p.arguments_for(&lit("b"));
    assert_eq!(supports(&args), [vec!["r1"]]);
    assert_eq!(args[0].derivation.step, Step::Defeasible("r1".into()));
    assert_eq!(args[0].derivation.premises[0].literal, lit("a"));
}

#[test]
fn two_minimal_arguments_match_subset_enumeration() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["b"], "c"),
            Rule::defeasible("r3", &["a"], "c"),
        ],
        &[],
    );
    let args = p.arguments_for(&lit("c"));
    assert_eq!(supports(&args), [vec!["r1", "r2"], vec!["r3"]]);
    let reference = ReferenceEngine::new(&p).unwrap();
    let mut expected: Vec<BTreeSet<String>> = reference
        .arguments_for(&lit("c"))
        .into_iter()
        .map(|a| a.support.clone())
        .collect();
    expected.sort();
    let mut got: Vec<BTreeSet<String>> = args.into_iter().map(|a| a.support).collect();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn inconsistent_supports_are_not_arguments() {
    // r1 and r2 together derive both x and ~x
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "c"),
            Rule::strict("s1", &["b"], "x"),
            Rule::strict("s2", &["c"], "~x"),
            Rule::strict("s3", &["b", "c"], "d"),
        ],
        &[],
    );
    assert!(p.arguments_for(&lit("d")).is_empty());
    assert_eq!(supports(&p.arguments_for(&lit("x"))), [vec!["r1"]]);
}

#[test]
fn cyclic_rules_terminate() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["b"], "c"),
            Rule::defeasible("r2", &["c"], "b"),
            Rule::defeasible("r3", &["a"], "b"),
        ],
        &[],
    );
    assert_eq!(supports(&p.arguments_for(&lit("c"))), [vec!["r1", "r3"]]);
    assert_eq!(supports(&p.arguments_for(&lit("b"))), [vec!["r3"]]);
}

#[test]
fn symmetric_blocking_defeats_both_ways() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ],
        &[],
    );
    let pos = &p.arguments_for(&lit("b"))[0];
    let neg = &p.arguments_for(&lit("~b"))[0];
    assert!(p.defeats(neg, pos));
    assert!(p.defeats(pos, neg));
}

#[test]
fn priority_breaks_symmetry() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ],
        &[("r2", "r1")],
    );
    let pos = &p.arguments_for(&lit("b"))[0];
    let neg = &p.arguments_for(&lit("~b"))[0];
    assert!(p.defeats(neg, pos));
    assert!(!p.defeats(pos, neg));
    let reference = ReferenceEngine::new(&p).unwrap();
    let rpos = reference.arguments_for(&lit("b"))[0];
    let rneg = reference.arguments_for(&lit("~b"))[0];
    assert!(reference.defeats(rneg, rpos));
    assert!(!reference.defeats(rpos, rneg));
}

#[test]
fn unrelated_conclusion_is_no_attack() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~c"),
        ],
        &[],
    );
    let b = &p.arguments_for(&lit("b"))[0];
    let not_c = &p.arguments_for(&lit("~c"))[0];
    assert!(!p.defeats(not_c, b));
    assert!(!p.defeats(b, not_c));
}

#[test]
fn attack_on_an_inner_literal() {
    // the argument for d passes through b; ~b attacks it there
    let p = program(
        &["a", "e"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["b"], "d"),
            Rule::defeasible("r3", &["e"], "~b"),
        ],
        &[("r3", "r1")],
    );
    let d = &p.arguments_for(&lit("d"))[0];
    let not_b = &p.arguments_for(&lit("~b"))[0];
    assert!(p.defeats(not_b, d));
    assert!(!p.defeats(d, not_b));
    assert_eq!(p.warrant(&lit("d")), Ok(Warrant::NotWarranted));
    assert_eq!(p.warrant(&lit("~b")), Ok(Warrant::Warranted));
}

#[test]
fn warrant_of_facts_and_absent_atoms() {
    let p = program(&["a"], vec![], &[]);
    assert_eq!(p.warrant(&lit("a")), Ok(Warrant::Warranted));
    assert_eq!(p.warrant(&lit("b")), Ok(Warrant::NotWarranted));
    assert_eq!(p.warrant(&lit("~a")), Ok(Warrant::NotWarranted));
}

#[test]
fn priority_decides_warrant() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ],
        &[("r1", "r2")],
    );
    assert_eq!(p.warrant(&lit("b")), Ok(Warrant::Warranted));
    assert_eq!(p.warrant(&lit("~b")), Ok(Warrant::NotWarranted));
    let reference = ReferenceEngine::new(&p).unwrap();
    assert_eq!(reference.warrant(&lit("b")), Warrant::Warranted);
    assert_eq!(reference.warrant(&lit("~b")), Warrant::NotWarranted);
}

#[test]
fn mutual_blocking_warrants_neither() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ],
        &[],
    );
    assert_eq!(p.warrant(&lit("b")), Ok(Warrant::NotWarranted));
    assert_eq!(p.warrant(&lit("~b")), Ok(Warrant::NotWarranted));
    let reference = ReferenceEngine::new(&p).unwrap();
    assert_eq!(reference.warrant(&lit("b")), Warrant::NotWarranted);
    assert_eq!(reference.warrant(&lit("~b")), Warrant::NotWarranted);
}

#[test]
fn reinstatement_through_a_third_argument() {
    // ~b blocks b, but ~b is itself defeated by the stronger ~c attack on c
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "c"),
            Rule::defeasible("r3", &["c"], "~b"),
            Rule::defeasible("r4", &["a"], "~c"),
        ],
        &[("r4", "r2")],
    );
    assert_eq!(p.warrant(&lit("b")), Ok(Warrant::Warranted));
    assert_eq!(p.warrant(&lit("~b")), Ok(Warrant::NotWarranted));
    let reference = ReferenceEngine::new(&p).unwrap();
    assert_eq!(reference.warrant(&lit("b")), Warrant::Warranted);
}

#[test]
fn consequences_examples() {
    let empty = program(&[], vec![], &[]);
    assert!(empty.consequences().unwrap().is_empty());
    let chain = program(&["a"], vec![Rule::defeasible("r1", &["a"], "b")], &[]);
    let expected: BTreeSet<Literal> = [lit("a"), lit("b")].into_iter().collect();
    assert_eq!(chain.consequences().unwrap(), expected);
}

#[test]
fn retraction_when_a_stronger_defeater_arrives() {
    let before = program(&["a"], vec![Rule::defeasible("r1", &["a"], "b")], &[]);
    assert_eq!(before.warrant(&lit("b")), Ok(Warrant::Warranted));
    let after = program(
        &["a", "c"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["c"], "~b"),
        ],
        &[("r2", "r1")],
    );
    assert_eq!(after.warrant(&lit("b")), Ok(Warrant::NotWarranted));
    assert_eq!(after.warrant(&lit("~b")), Ok(Warrant::Warranted));
}

#[test]
fn inconsistent_base_is_reported() {
    let p = program(&["a", "~a"], vec![], &[]);
    assert!(!p.is_consistent());
    assert_eq!(p.warrant(&lit("a")), Err(InconsistentBase(lit("a"))));
    assert!(p.consequences().is_err());
}

#[test]
fn blocked_tree_shows_symmetric_defeaters() {
    let p = program(
        &["a"],
        vec![
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ],
        &[],
    );
    let trees = p.dialectical_trees(&lit("b"));
    assert_eq!(trees.len(), 1);
    let t = &trees[0];
    assert_eq!(t.mark, Mark::Defeated);
    assert_eq!(t.defeaters.len(), 1);
    assert_eq!(t.defeaters[0].argument.conclusion, lit("~b"));
    assert_eq!(t.defeaters[0].mark, Mark::Undefeated);
    // the line b, ~b cannot continue with b again
    assert!(t.defeaters[0].defeaters.is_empty());
    assert_eq!(
        t.render(),
        "argument <{r1}, b> [D]\n  defeated by <{r2}, ~b> [U]\n"
    );
}

#[test]
fn strict_only_consequences_equal_closure() {
    let p = program(
        &["a", "~z"],
        vec![
            Rule::strict("s1", &["a"], "b"),
            Rule::strict("s2", &["b", "a"], "~c"),
            Rule::strict("s3", &["q"], "r"),
        ],
        &[],
    );
    let expected: BTreeSet<Literal> = ["a", "b", "~c", "~z"].iter().map(|s| lit(s)).collect();
    assert_eq!(p.consequences().unwrap(), expected);
}
