//! Human-readable output.

use std::fmt::{Display, Write};

use uff_core::{Listing, ProbeReport, Scope, Witness};

fn list<T: Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn completeness(exact: bool) -> &'static str {
    if exact {
        "complete"
    } else {
        "partial"
    }
}

pub fn listing<T: Display>(head: &str, l: &Listing<T>) -> String {
    let mut s = format!("{head}: {} item(s), {}", l.items.len(), completeness(l.exact));
    if l.cap_hit {
        s.push_str(", enumeration cap hit");
    }
    s.push('\n');
    for item in &l.items {
        let _ = writeln!(s, "  {item}");
    }
    if !l.undecided.is_empty() {
        let _ = writeln!(s, "  undecided: {}", list(&l.undecided));
    }
    s
}

pub fn report(head: &str, r: &ProbeReport) -> String {
    let scope = match r.scope {
        Scope::Global => "global",
        Scope::Sample => "sample only",
    };
    let mut s = format!("{head}: {} ({scope})\n", r.verdict);
    for w in &r.witnesses {
        let _ = writeln!(s, "  {}", witness(w));
    }
    let b = &r.budget;
    let u = &r.budget_used;
    let _ = writeln!(
        s,
        "budget: truncate {}, limit {}, cap {}; used: index {}, {} nodes",
        b.truncation_index, b.witness_limit, b.enumeration_cap, u.truncation_index, u.enumeration_count
    );
    s
}

fn witness(w: &Witness) -> String {
    match w {
        Witness::Representation { element, combination } => format!("{element} = {combination}"),
        Witness::Decomposition { element, left, right } => format!("{element} = {left} + {right}"),
        Witness::Factorizations { element, factorizations, exact } => {
            format!("factorizations of {element} ({}): {}", completeness(*exact), list(factorizations))
        }
        Witness::Lengths { element, lengths, exact } => {
            format!("lengths of {element} ({}): {}", completeness(*exact), list(lengths))
        }
        Witness::AtomDivisors { element, atoms, exact } => {
            format!("atoms dividing {element} ({}): {}", completeness(*exact), list(atoms))
        }
        Witness::Mcds { set, mcds, exact } => {
            format!("MCDs of {{{}}} ({}): {}", list(set), completeness(*exact), list(mcds))
        }
        Witness::Atoms { atoms, exact } => format!("atoms ({}): {}", completeness(*exact), list(atoms)),
        Witness::HalvingSplit { element, half } => format!("{element} = {half} + {half}"),
        Witness::Membership { element, verdict } => format!("{element} is a member: {verdict}"),
        Witness::Note { text } => format!("note: {text}"),
    }
}
