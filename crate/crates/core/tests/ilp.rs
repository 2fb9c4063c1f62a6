mod common;

use common::{lp_reader, rng};
use gridmend_core::ilp::{build_ilp, exact_enum, export_model};
use gridmend_core::{list_schedule, Instance};
use rand::Rng;

#[test]
fn every_list_schedule_is_a_feasible_point_with_its_harm() {
    let mut r = rng(31);
    for _ in 0..60 {
        let nodes = r.random_range(2..=9);
        let damaged = r.random_range(1..nodes);
        let crews = r.random_range(1..=3);
        let net = common::tiny_network(&mut r, nodes, damaged);
        let inst = Instance::new(net.clone());
        let mut order: Vec<usize> = (0..inst.forest.len()).collect();
        for k in (1..order.len()).rev() {
            order.swap(k, r.random_range(0..=k));
        }
        let s = list_schedule(&inst.forest, &order, crews).unwrap();
        let model = build_ilp(&net, crews, None).unwrap();
        let values = model.implied_values(&s.completions(inst.forest.len()).unwrap()).unwrap();
        let broken = model.violations(&values, 1e-9).unwrap();
        assert!(broken.is_empty(), "{broken:?}\n{}", net.to_text());
        assert_eq!(model.objective_value(&values), s.harm(&inst.forest).unwrap());
    }
}

#[test]
fn exported_model_reads_back_row_for_row() {
    let mut r = rng(32);
    for _ in 0..10 {
        let net = common::tiny_network(&mut r, 7, 4);
        let model = build_ilp(&net, 2, None).unwrap();
        let lp = lp_reader::parse(&export_model(&model));
        assert_eq!(lp.names.len(), model.vars.len());
        assert_eq!(lp.rows.len(), model.rows.len());
        assert_eq!(lp.constant, model.objective_constant);
        for (row, (terms, _, rhs)) in model.rows.iter().zip(&lp.rows) {
            assert_eq!(row.rhs, *rhs, "{}", row.name);
            let named: Vec<(&str, f64)> = row.terms.iter().map(|&(v, c)| (model.vars[v].name.as_str(), c)).collect();
            let read: Vec<(&str, f64)> = terms.iter().map(|&(v, c)| (lp.names[v].as_str(), c)).collect();
            assert_eq!(named, read, "{}", row.name);
        }
        let binaries = lp.binary.iter().filter(|&&b| b).count();
        let free = lp.free.iter().filter(|&&b| b).count();
        assert_eq!(binaries + free, model.vars.len());
    }
}

#[test]
fn solver_optimum_equals_search_optimum_single_crew() {
    let mut r = rng(33);
    for _ in 0..5 {
        let net = common::tiny_network(&mut r, 5, 3);
        let inst = Instance::new(net.clone());
        let exact = exact_enum(&inst.forest, 1).unwrap().harm;
        let model = build_ilp(&net, 1, None).unwrap();
        let mip = lp_reader::solve(&lp_reader::parse(&export_model(&model)));
        assert!((mip.objective - exact).abs() < 1e-6, "{} vs {exact}", mip.objective);
    }
}
