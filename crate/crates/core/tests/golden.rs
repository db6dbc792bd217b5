//! Regression against files in `tests/golden`, produced by the independent
//! script `tests/golden/generate.py`.

use sixteenons::io::render_bound_report;
use sixteenons::rational::{format_rational, int, parse_rational};
use sixteenons::{evaluate_bound, CdNumber, ElementSet, EvalOptions, Mode};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn element(value: &toml::Value) -> CdNumber {
    let coords = value
        .as_array()
        .unwrap()
        .iter()
        .map(|c| parse_rational(c.as_str().unwrap()).unwrap())
        .collect();
    CdNumber::new(4, coords).unwrap()
}

#[test]
fn octonion_multiplication_table() {
    let table = golden("octonion_table.txt");
    let mut rows = 0;
    for line in table.lines().filter(|l| !l.starts_with('#')) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [i, j, sign, k] = parts[..] else { panic!("bad row {line}") };
        let (i, j, k): (usize, usize, usize) = (i.parse().unwrap(), j.parse().unwrap(), k.parse().unwrap());
        let expected = CdNumber::basis(3, k).scale(&int(if sign == "+" { 1 } else { -1 }));
        assert_eq!(&CdNumber::basis(3, i) * &CdNumber::basis(3, j), expected, "e{i} e{j}");
        rows += 1;
    }
    assert_eq!(rows, 64);
}

#[test]
fn right_distributivity_fails_for_a_non_niner() {
    let t: toml::Table = golden("right_distributivity_counterexample.toml").parse().unwrap();
    let [y, z, x, lhs, rhs] = ["y", "z", "x", "lhs", "rhs"].map(|k| element(&t[k]));
    assert!(!x.is_niner().unwrap());
    assert_eq!(&(&y + &z) * &x, lhs);
    assert_eq!(&(&y * &x) + &(&z * &x), rhs);
    assert_ne!(lhs, rhs);
}

fn powers_of_two() -> ElementSet {
    ElementSet::new(4, [1, 2, 4, 8].map(|v| CdNumber::real(4, int(v)))).unwrap()
}

fn ints(v: &toml::Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_integer().unwrap()).collect()
}

fn strings(v: &toml::Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn powers_of_two_match_the_script() {
    let t: toml::Table = golden("powers_of_two.toml").parse().unwrap();
    let r = evaluate_bound(&powers_of_two(), EvalOptions::new(Mode::SixteenOn)).unwrap();
    assert_eq!(r.energy_prime as i64, t["energy_prime"].as_integer().unwrap());
    assert_eq!(r.sumset_size as i64, t["sumset_size"].as_integer().unwrap());
    assert_eq!(r.ratioset_size as i64, t["ratioset_size"].as_integer().unwrap());
    assert_eq!(i64::from(r.chosen_i()), t["chosen_i"].as_integer().unwrap());
    let weights: Vec<Vec<i64>> = t["weights"].as_array().unwrap().iter().map(ints).collect();
    let ours: Vec<Vec<i64>> = r.buckets.weights.iter().map(|(&i, &w)| vec![i64::from(i), w as i64]).collect();
    assert_eq!(ours, weights);
    let first = |x: &CdNumber| format_rational(&x.coords()[0]);
    assert_eq!(r.r_profiles().iter().map(|p| first(&p.x)).collect::<Vec<_>>(), strings(&t["r"]));
    assert_eq!(r.phi.iter().map(|(_, y)| first(y)).collect::<Vec<_>>(), strings(&t["phi"]));
    assert_eq!(r.sx.iter().map(|s| s.size as i64).collect::<Vec<_>>(), ints(&t["sx_sizes"]));
    assert_eq!(r.sum_sx.unwrap() as i64, t["sum_sx"].as_integer().unwrap());
    assert_eq!(r.union_sx.unwrap() as i64, t["union_sx"].as_integer().unwrap());
    assert_eq!(format_rational(r.ratio.as_ref().unwrap()), t["ratio"].as_str().unwrap());
}

#[test]
fn powers_of_two_report_is_frozen() {
    let r = evaluate_bound(&powers_of_two(), EvalOptions::new(Mode::SixteenOn)).unwrap();
    assert_eq!(render_bound_report(&r), golden("powers_of_two.report"));
}
