use pmzv::engine::*;
use pmzv::adjoint::phi_from_table;
use pmzv::ncseries::is_grouplike;
use std::time::Instant;

fn main() {
    let p: u64 = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(5);
    let w: usize = std::env::args().nth(2).map(|s| s.parse().unwrap()).unwrap_or(4);
    let n: u32 = std::env::args().nth(3).map(|s| s.parse().unwrap()).unwrap_or_else(|| default_n_max(p));
    let t = Instant::now();
    let table = match build_table(p, w, w, 6, n, SignMode::Corrected) {
        Ok(t) => t,
        Err(e) => { println!("BUILD FAILED: {e}"); std::process::exit(1); }
    };
    println!("build took {:?}", t.elapsed());
    for (idx, e) in table.entries() {
        println!("zeta({idx}): certified={} value={}", e.certified, e.value);
    }
    let trunc = table.truncated_copy();
    let phi = phi_from_table(&trunc, w).unwrap();
    let backend = trunc.backend();
    match is_grouplike(&backend, &phi) {
        Ok(()) => println!("SHUFFLE CONSISTENT at weight {w}"),
        Err((u, v)) => println!("SHUFFLE VIOLATION at pair ({u}, {v})"),
    }
    println!("total {:?}", t.elapsed());
}
