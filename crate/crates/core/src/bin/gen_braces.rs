//! Generates a brace catalog file for one order, e.g. the order-8 file
//! shipped under `data/`:
//!
//! ```text
//! gen-braces 8 > data/braces_order8.json
//! ```

use std::io::Write;
use std::process::ExitCode;

use ybre::brace::{enumerate_skew_braces_unbounded, BraceFile};

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let order: usize = match args.next().and_then(|a| a.parse().ok()) {
        Some(n) if n > 0 => n,
        _ => {
            eprintln!("usage: gen-braces <order>");
            return ExitCode::from(2);
        }
    };
    let entries = match enumerate_skew_braces_unbounded(order) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    eprintln!("order {order}: {} skew braces up to isomorphism", entries.len());
    let file = BraceFile::from_entries(order, &entries);
    let json = serde_json::to_string_pretty(&file).expect("serializable");
    let mut out = std::io::stdout().lock();
    out.write_all(json.as_bytes()).expect("write stdout");
    out.write_all(b"\n").expect("write stdout");
    ExitCode::SUCCESS
}
