use pmzv::verify::*;
use std::time::Instant;

fn show(rep: &SuiteReport) {
    for c in &rep.checks {
        println!(
            "[{}] ({}) {}{}",
            if c.pass { "PASS" } else { "FAIL" },
            rep.name,
            c.label,
            c.detail.as_ref().map(|d| format!(" — {d}")).unwrap_or_default()
        );
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");
    let mut all = true;
    let mut run = |name: &str, f: &dyn Fn() -> SuiteReport| {
        if which != "all" && which != name {
            return;
        }
        let t = Instant::now();
        let rep = f();
        show(&rep);
        println!("  ({} took {:?})", name, t.elapsed());
        all &= rep.passed();
    };
    run("contraction", &|| suite_contraction(42, 100, 5));
    run("triangle", &|| suite_triangle(42, 4, 20, 3));
    run("transforms", &|| suite_transforms(42));
    run("bmhs", &suite_bmhs);
    run("even-zeta", &|| suite_even_zeta(6));
    run("convergence", &|| suite_convergence(5, 6));
    run("exact-zero", &suite_exact_zero);
    run("examples3", &|| suite_examples(3, 6));
    run("examples5", &|| suite_examples(5, 6));
    run("shuffle", &|| suite_shuffle(5, 4, 6));
    run("adjoint", &|| suite_adjoint(5, 6, 5));
    std::process::exit(if all { 0 } else { 1 });
}
