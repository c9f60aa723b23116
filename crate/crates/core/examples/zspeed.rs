use efl_core::lseries::CompletedLFunction;
use efl_core::zeros::find_zeros;
use std::time::Instant;
fn main() {
    let zeta = CompletedLFunction::zeta();
    let t0 = Instant::now();
    let list = find_zeros(&zeta, 400.0).unwrap();
    println!("zeta zeros to 400: {} upper, {:?}", list.upper().count(), t0.elapsed());
    let chi4 = efl_core::characters::character_by_index(4, 1).unwrap();
    let lam = CompletedLFunction::dirichlet(&chi4).unwrap();
    let t1 = Instant::now();
    let list2 = find_zeros(&lam, 100.0).unwrap();
    println!("chi4 zeros to 100: {} upper, {:?}", list2.upper().count(), t1.elapsed());
}
