use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::engine::consistent;
use crate::literal::Literal;
use crate::ontology::Model;

use super::candidate::{group_label, Candidate, CompulsoryCombo};
use super::SolveError;

/// Every consistent way of picking one compulsory member per alternatives
/// group, in lexicographic order of the choices. Consistency is checked on
/// the literals of all chosen compulsory elements under the strict rules.
pub fn enumerate_compulsory_combinations(model: &Model) -> Result<Vec<CompulsoryCombo>, SolveError> {
    let part = model.partition_by_optionality();
    let compulsory: BTreeSet<&String> = part.compulsory.values().flatten().collect();
    let fixed: BTreeSet<String> = compulsory
        .iter()
        .filter(|id| model.group_of(id).is_none())
        .map(|id| (*id).clone())
        .collect();
    let groups: Vec<(String, Vec<String>)> = model
        .alternatives
        .iter()
        .map(|g| {
            let members: Vec<String> = g.iter().filter(|m| compulsory.contains(m)).cloned().collect();
            (group_label(g), members)
        })
        .filter(|(_, m)| !m.is_empty())
        .collect();

    let literals = |ids: &mut dyn Iterator<Item = &String>| -> Vec<Literal> {
        ids.filter_map(|id| model.elements.get(id))
            .flat_map(|e| model.ground_literals(e))
            .collect()
    };
    let base = literals(&mut fixed.iter());
    let mut out = Vec::new();
    let mut idx = vec![0usize; groups.len()];
    loop {
        let chosen: Vec<&String> = groups.iter().zip(&idx).map(|((_, m), &i)| &m[i]).collect();
        let mut lits = base.clone();
        lits.extend(literals(&mut chosen.iter().copied()));
        if consistent(&lits, model.strict_rules()) {
            out.push(CompulsoryCombo {
                chosen: groups
                    .iter()
                    .zip(&chosen)
                    .map(|((label, _), c)| (label.clone(), (*c).clone()))
                    .collect(),
                fixed: fixed.clone(),
            });
        }
        // odometer, last group fastest
        let mut k = groups.len();
        loop {
            if k == 0 {
                return if out.is_empty() {
                    Err(SolveError::UnsatisfiableCore)
                } else {
                    Ok(out)
                };
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < groups[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// An independent choice of optional content: a lone element (in or out),
/// or an all-optional alternatives group (none or one member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Slot {
    pub members: Vec<String>,
}

/// Optional choices available on top of `combo`. Optional members of a group
/// whose slot is taken by a compulsory choice are unavailable.
pub(crate) fn optional_slots(model: &Model, combo: &CompulsoryCombo) -> Vec<Slot> {
    let part = model.partition_by_optionality();
    let optional: BTreeSet<&String> = part.optional.values().flatten().collect();
    let mut slots: Vec<Slot> = Vec::new();
    let mut seen_groups = BTreeSet::new();
    for id in &optional {
        match model.group_of(id) {
            None => slots.push(Slot {
                members: vec![(*id).clone()],
            }),
            Some(g) => {
                if g.iter().any(|m| combo.contains(m)) || !seen_groups.insert(group_label(g)) {
                    continue;
                }
                slots.push(Slot {
                    members: g.iter().filter(|m| optional.contains(m)).cloned().collect(),
                });
            }
        }
    }
    slots.sort_by(|a, b| a.members.cmp(&b.members));
    slots
}

/// Visits candidates in order of decreasing number of optional choices;
/// within a level, combos in order, then slot selections lexicographically.
pub(crate) fn for_each_candidate<F>(model: &Model, combos: &[CompulsoryCombo], mut visit: F)
where
    F: FnMut(Candidate) -> ControlFlow<()>,
{
    let slots: Vec<Vec<Slot>> = combos.iter().map(|c| optional_slots(model, c)).collect();
    let max = slots.iter().map(Vec::len).max().unwrap_or(0);
    for level in (0..=max).rev() {
        for (combo, slots) in combos.iter().zip(&slots) {
            if level > slots.len() {
                continue;
            }
            let flow = for_each_selection(slots.len(), level, |sel| {
                // member choice per selected slot, odometer style
                let mut idx = vec![0usize; sel.len()];
                loop {
                    let extra: Vec<&str> = sel
                        .iter()
                        .zip(&idx)
                        .map(|(&s, &i)| slots[s].members[i].as_str())
                        .collect();
                    visit(Candidate::new(model, combo.clone(), extra))?;
                    let mut k = sel.len();
                    loop {
                        if k == 0 {
                            return ControlFlow::Continue(());
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < slots[sel[k]].members.len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            });
            if flow.is_break() {
                return;
            }
        }
    }
}

/// k-subsets of `0..n` in lexicographic order.
fn for_each_selection<F>(n: usize, k: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut sel: Vec<usize> = (0..k).collect();
    loop {
        f(&sel)?;
        let mut i = k;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            if sel[i] < n - k + i {
                break;
            }
        }
        sel[i] += 1;
        for j in i + 1..k {
            sel[j] = sel[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selections_are_lexicographic() {
        let mut seen = Vec::new();
        let _ = for_each_selection(4, 2, |s| {
            seen.push(s.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(
            seen,
            [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]].map(|a| a.to_vec())
        );
        let mut empty = 0;
        let _ = for_each_selection(3, 0, |_| {
            empty += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(empty, 1);
    }
}
