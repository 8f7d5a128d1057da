use pqfreq::constants::{c_pq, pi_pq, pi_pq_numeric, OneDimOptions};
use pqfreq::ExponentPair;

/// CSV of `π_{p,q}`, `C_{p,q}` and the relative gap to the discrete
/// minimizer on `n` cells; inadmissible pairs get a row with a note only.
pub fn constants_table(ps: &[f64], qs: &[f64], n: usize) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "q", "pi_pq", "c_pq", "pi_pq_numeric", "rel_delta", "note"]).expect("in-memory write");
    let opts = OneDimOptions::default();
    for &p in ps {
        for &q in qs {
            let row = ExponentPair::new(p, q).and_then(|e| {
                let pi = pi_pq(&e)?;
                let c = c_pq(&e)?;
                let num = pi_pq_numeric(&e, n, &opts)?;
                Ok((pi, c, num.value, if num.converged { "" } else { "numeric minimizer did not converge" }))
            });
            let record = match row {
                Ok((pi, c, num, note)) => {
                    [p.to_string(), q.to_string(), pi.to_string(), c.to_string(), num.to_string(), ((num - pi) / pi).to_string(), note.into()]
                }
                Err(e) => [p.to_string(), q.to_string(), String::new(), String::new(), String::new(), String::new(), format!("skipped: {e}")],
            };
            w.write_record(&record).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_rows_and_skips() {
        let t = constants_table(&[2.0], &[1.0, 2.0, 3.0], 400);
        let rows: Vec<Vec<String>> = csv::Reader::from_reader(t.as_bytes())
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        assert_eq!(rows.len(), 3);
        let c21: f64 = rows[0][3].parse().unwrap();
        assert!((c21 - 1.0).abs() < 1e-12);
        let c22: f64 = rows[1][3].parse().unwrap();
        assert!((c22 - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-12);
        for r in &rows[..2] {
            assert!(r[5].parse::<f64>().unwrap().abs() < 0.01);
        }
        assert!(rows[2][6].starts_with("skipped"));
    }
}
