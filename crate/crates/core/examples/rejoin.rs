//! Glues marked suffix tokens back onto their words.

use stemlm::corpus::tokenize_line;
use stemlm::postproc::{rejoin_counted, RejoinConfig};

fn main() {
    let config = RejoinConfig::default();
    for line in ["చదువు +చున్నాడు", "walk +ing home", "+గా ను", "a b c", "stem +a +b"] {
        let (out, report) = rejoin_counted(&tokenize_line(line), config);
        println!("{line:<20} -> {:<16} {report:?}", out.to_line());
    }
}
