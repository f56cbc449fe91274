use clap::ValueEnum;
use mobile_atlas::series::{AuxPoly, GSeries};
use num_traits::One;
use serde_json::json;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// `c * m * (q)` with `q` primitive; plain form when nothing factors out.
pub fn factored(p: &AuxPoly) -> String {
    let (c, mono) = p.content();
    if p.len() < 2 || (c.is_one() && mono.is_one()) {
        return p.to_string();
    }
    let q = p.terms().fold(AuxPoly::zero(), |acc, (m, x)| {
        let m = m.div(&mono).expect("common factor divides every term");
        &acc + &AuxPoly::term(x / &c, m)
    });
    let mut head = Vec::new();
    if c == -num_rational::BigRational::one() {
        head.push("-".to_string());
    } else if !c.is_one() {
        head.push(format!("{}*", AuxPoly::constant(c)));
    }
    if !mono.is_one() {
        head.push(format!("{mono}*"));
    }
    format!("{}({q})", head.concat())
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Coefficients `0..=order` of each named series. JSON carries the canonical expanded
/// strings; the pretty form pulls out the content of each coefficient.
pub fn print_table(model: &str, order: usize, table: &[(String, GSeries)], format: Format) {
    match format {
        Format::Json => {
            let series: serde_json::Map<String, serde_json::Value> =
                table.iter().map(|(name, s)| (name.clone(), json!((0..=order).map(|n| s.coefficient(n).to_string()).collect::<Vec<_>>()))).collect();
            let v = json!({"model": model, "order": order, "series": series});
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Csv => {
            let header: Vec<&str> = table.iter().map(|(n, _)| n.as_str()).collect();
            println!("n,{}", header.join(","));
            for n in 0..=order {
                let row: Vec<String> = table.iter().map(|(_, s)| csv_field(&s.coefficient(n).to_string())).collect();
                println!("{n},{}", row.join(","));
            }
        }
        Format::Pretty => {
            for (name, s) in table {
                println!("{name}:");
                for n in 0..=order {
                    let c = s.coefficient(n);
                    if !c.is_zero() {
                        println!("  g^{n}  {}", factored(c));
                    }
                }
            }
        }
    }
}
