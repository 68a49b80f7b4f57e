//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use conlat::analysis::{dual_leaf, pseudoprop_at, pseudoprop_check, star_filter_interval, top_block, StarFilter};
use conlat::catalog::{random_automorphism_group, random_quasi_identity, random_single_generator, rng, semilattices_up_to};
use conlat::congruence::{congruence_lattice, is_compatible};
use conlat::eon::{con_eon_isomorphism, eon_lattice, eon_rule_check, EonMode, DEFAULT_EXHAUSTIVE_BOUND};
use conlat::fixtures::{chain3, omega, pipeline_fixtures, s22_swap};
use conlat::instance::Instance;
use conlat::model::{reduction_check, verify_combined, verify_pseudo_lemma, verify_second};
use conlat::monoid::OperatorMonoid;
use conlat::partition::all_partitions;
use conlat::presentation::{present_combined, QuasiIdentity};

const SEED: u64 = 20240;

struct Outcome {
    failure: Option<String>,
    detail: String,
}

fn pass(detail: String) -> Outcome {
    Outcome { failure: None, detail }
}

fn fail(why: String) -> Outcome {
    Outcome {
        failure: Some(why),
        detail: String::new(),
    }
}

/// Fixtures of the combined-pipeline criteria: three named instances and
/// 25 seeded random automorphism groups of order at most 3.
fn pipeline_instances() -> Vec<(String, Instance)> {
    let mut out: Vec<(String, Instance)> = pipeline_fixtures().into_iter().map(|(n, i)| (n.to_string(), i)).collect();
    let mut r = rng(SEED + 3);
    for k in 0..25 {
        out.push((format!("random{k}"), random_automorphism_group(&mut r, 5, 3)));
    }
    out
}

fn criterion1() -> Outcome {
    let mut instances: Vec<Instance> = semilattices_up_to(5).into_iter().map(Instance::trivial).collect();
    let exhaustive = instances.len();
    let mut r = rng(SEED + 1);
    instances.extend((0..100).map(|_| random_single_generator(&mut r, 5)));
    for inst in &instances {
        let (s, m) = (&inst.semilattice, &inst.monoid);
        let con = congruence_lattice(s, m);
        let eon = match eon_lattice(s, m, EonMode::Auto, DEFAULT_EXHAUSTIVE_BOUND) {
            Ok(e) => e,
            Err(e) => return fail(e.to_string()),
        };
        if con.len() != eon.len() {
            return fail(format!("|con|={} |eon|={} on\n{}", con.len(), eon.len(), inst.render()));
        }
        if let Err(e) = con_eon_isomorphism(s, &con, &eon) {
            return fail(format!("{e} on\n{}", inst.render()));
        }
    }
    pass(format!("{exhaustive} semilattices + 100 random instances"))
}

fn criterion2() -> Outcome {
    let all = semilattices_up_to(5);
    let (mut pairs, mut families) = (0, 0);
    for s in &all {
        match eon_rule_check(s, &OperatorMonoid::trivial(s)) {
            Ok(rep) if rep.passed() => {
                pairs += rep.pairs_checked;
                families += rep.families_checked;
            }
            Ok(rep) => return fail(rep.first_failure.unwrap_or_default()),
            Err(e) => return fail(e.to_string()),
        }
    }
    pass(format!("{} semilattices, {pairs} pairs, {families} families", all.len()))
}

fn criterion3() -> Outcome {
    let instances = pipeline_instances();
    for (name, inst) in &instances {
        let s = &inst.semilattice;
        match verify_combined(s, &inst.monoid) {
            Ok(r) if r.passed() => {}
            Ok(r) => return fail(format!("{name}:\n{}", r.render())),
            Err(e) => return fail(format!("{name}: {e}")),
        }
    }
    pass(format!("{} instances, all free-structure checks and final isomorphism", instances.len()))
}

fn criterion4() -> Outcome {
    let all = semilattices_up_to(5);
    for s in &all {
        match verify_second(s) {
            Ok(r) if r.passed() => {}
            Ok(r) => return fail(r.render()),
            Err(e) => return fail(e.to_string()),
        }
    }
    pass(format!("{} semilattices", all.len()))
}

fn criterion5() -> Outcome {
    let l = dual_leaf();
    let p = l.properties();
    if l.size() != 12 || !p.sd_meet || p.upper_bounded {
        return fail(format!("size={} {}", l.size(), p.render().replace('\n', " ")));
    }
    pass("size=12 sd_meet=true upper_bounded=false".into())
}

fn criterion6() -> Outcome {
    let inst = s22_swap();
    let ctx = match present_combined(&inst.semilattice, &inst.monoid) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let mut r = rng(SEED + 6);
    let laws: Vec<QuasiIdentity> = (0..200).map(|_| random_quasi_identity(&mut r, &ctx, 3)).collect();
    match reduction_check(&ctx, &laws, 4) {
        Ok(rep) if rep.passed() => pass(format!("{} laws over {} models", rep.laws, rep.models)),
        Ok(rep) => fail(rep.mismatches.join("; ")),
        Err(e) => fail(e.to_string()),
    }
}

fn criterion7() -> Outcome {
    let instances = pipeline_instances();
    for (name, inst) in &instances {
        match verify_pseudo_lemma(&inst.semilattice, &inst.monoid) {
            Ok(r) if r.passed() => {}
            Ok(r) => return fail(format!("{name}:\n{}", r.render())),
            Err(e) => return fail(format!("{name}: {e}")),
        }
    }
    pass(format!("{} instances", instances.len()))
}

fn criterion8() -> Outcome {
    let mut instances = pipeline_instances();
    instances.push(("omega-4".into(), omega(4)));
    let mut checked = 0;
    for (name, inst) in &instances {
        let (s, m) = (&inst.semilattice, &inst.monoid);
        let con = congruence_lattice(s, m);
        // oracle: every compatible partition, grouped by top block
        let brute: Vec<_> = all_partitions(s.size()).into_iter().filter(|p| is_compatible(s, m, p)).collect();
        for theta in &con.elements {
            let f = top_block(s, theta);
            let filter = match StarFilter::new(s, m, f) {
                Ok(x) => x,
                Err(e) => return fail(format!("{name}: {} {e}", theta.label())),
            };
            let iv = match star_filter_interval(s, m, &con, &filter) {
                Ok(x) => x,
                Err(e) => return fail(format!("{name}: {e}")),
            };
            if !(iv.phi.leq(theta) && theta.leq(&iv.psi)) {
                return fail(format!("{name}: {} outside [phi, psi]", theta.label()));
            }
            let mut got: Vec<_> = iv.members.iter().map(|&i| con.elements[i].partition().clone()).collect();
            let mut want: Vec<_> = brute
                .iter()
                .filter(|p| (0..s.size()).filter(|&x| p.related(x, s.top())).fold(0u64, |a, x| a | 1 << x) == f)
                .cloned()
                .collect();
            got.sort();
            want.sort();
            if got != want {
                return fail(format!("{name}: members of {} differ from oracle", theta.label()));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} congruences over {} instances", instances.len()))
}

fn criterion9() -> Outcome {
    let mut instances = pipeline_instances();
    instances.push(("omega-4".into(), omega(4)));
    instances.push(("chain3".into(), chain3()));
    let mut tested = 0;
    for (name, inst) in &instances {
        let (s, m) = (&inst.semilattice, &inst.monoid);
        if !m.flags().fixes_top {
            continue;
        }
        if pseudoprop_at(s, m, s.top()).is_none() {
            return fail(format!("{name}: k=top fails"));
        }
        tested += 1;
    }
    let text = pseudoprop_check(&omega(4).semilattice, &omega(4).monoid).render(&omega(4).monoid);
    if !(text.contains("omega") && text.contains("infinite")) {
        return fail("report lacks the infinite-example note".into());
    }
    pass(format!("{tested} instances with fixes_top, note present"))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome, Duration); 9] = [
        (1, criterion1, Duration::from_secs(60)),
        (2, criterion2, Duration::from_secs(60)),
        (3, criterion3, Duration::from_secs(120)),
        (4, criterion4, Duration::from_secs(600)),
        (5, criterion5, Duration::from_secs(1)),
        (6, criterion6, Duration::from_secs(600)),
        (7, criterion7, Duration::from_secs(600)),
        (8, criterion8, Duration::from_secs(600)),
        (9, criterion9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (n, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let (status, detail) = match (&out.failure, elapsed <= limit) {
            (None, true) => ("PASS", out.detail),
            (None, false) => ("FAIL", format!("took {elapsed:.2?}, limit {limit:?}")),
            (Some(why), _) => ("FAIL", why.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n} {status} ({elapsed:.2?}) {detail}");
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
