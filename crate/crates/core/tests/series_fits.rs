use asf_core::rational::{fmt_q, q, Q};
use asf_core::series::*;

fn gl2_train_validate() -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    ((0..=6).map(|n| vec![n]).collect(), vec![vec![7], vec![8]])
}

#[test]
fn gl2_count_series_is_rational() {
    let (train, validate) = gl2_train_validate();
    let all: Vec<Vec<u32>> = train.iter().chain(&validate).cloned().collect();
    for p in [2u32, 3] {
        let data = count_grid(&all, p).unwrap();
        let fit = fit_rational(&data, &train, &validate, 4, 4).unwrap();
        assert!(fit.is_certified(), "{}", fit.to_json());
        let pq = q(p as i64);
        assert_eq!(fit.denominator.get(&vec![1]), Some(&-(pq.clone() + q(1))));
        assert_eq!(fit.denominator.get(&vec![2]), Some(&pq));
        assert_eq!(fit.numerator.get(&vec![0]), Some(&q(1)));
    }
}

#[test]
fn gl2_orbital_series_is_rational() {
    let (train, validate) = gl2_train_validate();
    let all: Vec<Vec<u32>> = train.iter().chain(&validate).cloned().collect();
    let mut dens = Vec::new();
    for p in [2u32, 3] {
        let data = orbital_grid(&all, p).unwrap();
        let fit = fit_rational(&data, &train, &validate, 4, 4).unwrap();
        assert!(fit.is_certified(), "{}", fit.to_json());
        println!("q={p}: {}", fit.to_json());
        dens.push(fit.den_degree);
    }
    assert_eq!(dens[0], dens[1]);
}

#[test]
fn gl2_n1_counts_are_linear_in_q() {
    let pts: Vec<(u32, Q)> = [2u32, 3, 5, 7, 11]
        .iter()
        .map(|&p| (p, count_grid(&[vec![1]], p).unwrap()[&vec![1]].clone()))
        .collect();
    let fit = interpolate_q(&pts, 3).unwrap();
    assert_eq!(fit.poly.to_string(), "q + 1");
    assert!(fit.consistency.contains(&11));
}

#[test]
fn gl2_counts_do_not_depend_on_the_unit_coefficients() {
    let r = datum_independence_check(&[2], 5, &[0, 1, 2]).unwrap();
    assert!(r.holds, "{r:?}");
    assert_eq!(r.counts[0], 31);
}

#[test]
fn zero_datum_counts_one() {
    for p in [2u32, 3, 5] {
        assert_eq!(fmt_q(&count_grid(&[vec![0]], p).unwrap()[&vec![0]]), "1");
    }
}

#[test]
fn csv_has_one_row_per_point() {
    let csv = to_csv(2, &[(vec![1, 0], 2, q(3)), (vec![1, 1], 3, q(67))]);
    assert_eq!(csv, "n1,n2,q,value\n1,0,2,3\n1,1,3,67\n");
}
