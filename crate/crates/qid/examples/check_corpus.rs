//! Decide quasi-infinite divisibility for a small corpus of discrete laws
//! and print the verdict, the certified infimum or the zero witness, and
//! the record-minima trail for the undecidable case.
//!
//! Run with: cargo run --release --example check_corpus

use qid::charfn::{qid_verdict, SearchBudget, VerdictTag};
use qid::laws;
use qid::DiscreteLaw;

fn main() {
    let corpus: Vec<(&str, DiscreteLaw)> = vec![
        ("dirac(2.5)", laws::dirac(2.5)),
        ("bernoulli(0.3)", laws::bernoulli(0.3)),
        ("bernoulli(0.5)", laws::bernoulli(0.5)),
        ("uniform{0,1,2}", laws::uniform(&[0.0, 1.0, 2.0])),
        ("uniform{0,1,sqrt2}", laws::uniform(&[0.0, 1.0, 2f64.sqrt()])),
        ("poisson(2)", laws::poisson(2.0)),
        ("geometric(0.5)", laws::geometric(0.5)),
    ];

    let mut budget = SearchBudget::default();
    budget.max_evals = 400_000;

    for (name, law) in &corpus {
        let v = qid_verdict(law, &budget);
        match v.tag {
            VerdictTag::Qid => {
                println!(
                    "{name:20} QID           inf|f| = {:.12} (certified: {})",
                    v.mu.unwrap(),
                    v.report.certified
                );
            }
            VerdictTag::NotQid => {
                println!(
                    "{name:20} NOT_QID       zero witness t = {:.12}",
                    v.witness.unwrap()
                );
            }
            VerdictTag::Inconclusive => {
                println!(
                    "{name:20} INCONCLUSIVE  {} record minima, last |f| = {:.6}",
                    v.report.record_minima.len(),
                    v.report.record_minima.last().unwrap().1
                );
                for (t, m) in v.report.record_minima.iter().take(8) {
                    println!("{:24}record |f({t:.6})| = {m:.9}", "");
                }
            }
        }
    }
}
