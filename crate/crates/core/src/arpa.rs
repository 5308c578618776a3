//! Reading and writing back-off models in the ARPA text format.
//!
//! Layout written:
//!
//! ```text
//! \data\
//! ngram 1=COUNT
//! ...
//!
//! \1-grams:
//! LOGPROB<TAB>w1[<TAB>BACKOFF]
//! ...
//!
//! \end\
//! ```
//!
//! Numbers use 7 significant digits in the shortest `%g` style; entries are
//! sorted by their token strings. The reader accepts any whitespace as a
//! field separator.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::corpus::{TokenId, Vocabulary};
use crate::error::{Error, Result};
use crate::smoothing::{BackoffModel, LOG_FLOOR};

/// One n-gram line.
#[derive(Debug, Clone, PartialEq)]
pub struct ArpaEntry {
    pub log_prob: f64,
    pub words: Vec<String>,
    pub backoff: Option<f64>,
}

/// The parsed content of an ARPA file, order by order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArpaDocument {
    /// Entries of order `k` at index `k - 1`.
    pub orders: Vec<Vec<ArpaEntry>>,
}

impl ArpaDocument {
    /// Entries of every order, sorted by token strings.
    pub fn from_model(model: &BackoffModel) -> Self {
        let vocab = model.vocab();
        let orders = (1..=model.order())
            .map(|k| {
                let mut entries: Vec<ArpaEntry> = model
                    .entries(k)
                    .iter()
                    .map(|(gram, e)| ArpaEntry {
                        log_prob: e.log_prob,
                        words: gram.iter().map(|&id| vocab.token(id).to_owned()).collect(),
                        backoff: e.backoff,
                    })
                    .collect();
                entries.sort_by(|a, b| a.words.cmp(&b.words));
                entries
            })
            .collect();
        ArpaDocument { orders }
    }

    /// Builds a model whose vocabulary is the set of unigram words.
    pub fn to_model(&self) -> Result<BackoffModel> {
        let Some(unigrams) = self.orders.first() else {
            return Err(Error::data("ARPA document has no n-gram orders"));
        };
        let vocab = Vocabulary::from_words(unigrams.iter().map(|e| e.words[0].as_str()));
        let mut model = BackoffModel::new(vocab, self.orders.len());
        for entries in &self.orders {
            for entry in entries {
                let gram = entry
                    .words
                    .iter()
                    .map(|w| {
                        model.vocab().id(w).ok_or_else(|| {
                            Error::data(format!("n-gram token {w:?} has no unigram entry"))
                        })
                    })
                    .collect::<Result<Vec<TokenId>>>()?;
                model.insert(gram, entry.log_prob, entry.backoff);
            }
        }
        Ok(model)
    }

    pub fn write<W: Write>(&self, mut sink: W) -> Result<()> {
        if self.orders.is_empty() || self.orders[0].is_empty() {
            return Err(Error::data("refusing to write an ARPA model with no n-grams"));
        }
        writeln!(sink, "\\data\\")?;
        for (i, entries) in self.orders.iter().enumerate() {
            writeln!(sink, "ngram {}={}", i + 1, entries.len())?;
        }
        for (i, entries) in self.orders.iter().enumerate() {
            writeln!(sink)?;
            writeln!(sink, "\\{}-grams:", i + 1)?;
            for e in entries {
                write!(sink, "{}\t{}", format_log10(e.log_prob), e.words.join(" "))?;
                if let Some(bo) = e.backoff {
                    write!(sink, "\t{}", format_log10(bo))?;
                }
                writeln!(sink)?;
            }
        }
        writeln!(sink)?;
        writeln!(sink, "\\end\\")?;
        sink.flush()?;
        Ok(())
    }

    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        Parser::default().run(source)
    }
}

pub fn write_arpa<W: Write>(model: &BackoffModel, sink: W) -> Result<()> {
    if model.order() == 0 {
        return Err(Error::data("refusing to write a model with no orders"));
    }
    ArpaDocument::from_model(model).write(sink)
}

pub fn read_arpa<R: BufRead>(source: R) -> Result<BackoffModel> {
    ArpaDocument::parse(source)?.to_model()
}

/// Formats a log10 value with 7 significant digits, `%g` style.
/// Values below the floor are written as the floor; `-0` is written as `0`.
pub fn format_log10(v: f64) -> String {
    let v = if v.is_nan() || v < LOG_FLOOR { LOG_FLOOR } else { v };
    format_significant(v, 7)
}

fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Default)]
struct Parser {
    declared: Vec<usize>,
    orders: Vec<Vec<ArpaEntry>>,
    seen: Vec<HashSet<Vec<String>>>,
    completed: usize,
}

enum State {
    Preamble,
    Header,
    Section(usize),
    Done,
}

impl Parser {
    fn run<R: BufRead>(mut self, source: R) -> Result<ArpaDocument> {
        let mut state = State::Preamble;
        let mut line_no = 0;
        for line in source.lines() {
            line_no += 1;
            let line = line.map_err(|e| Error::parse(line_no, e.to_string()))?;
            let text = line.trim();
            match state {
                State::Preamble => {
                    if text == "\\data\\" {
                        state = State::Header;
                    }
                }
                State::Header => {
                    if text.is_empty() {
                        continue;
                    }
                    if let Some(rest) = text.strip_prefix("ngram ") {
                        self.header_line(rest, line_no)?;
                    } else {
                        state = self.section_start(text, line_no)?;
                    }
                }
                State::Section(k) => {
                    if text.is_empty() {
                        continue;
                    }
                    if text.starts_with('\\') {
                        self.check_count(k, line_no)?;
                        state = self.section_start(text, line_no)?;
                    } else {
                        self.entry_line(k, text, line_no)?;
                    }
                }
                State::Done => {
                    if !text.is_empty() {
                        return Err(Error::parse(line_no, "content after \\end\\"));
                    }
                }
            }
        }
        match state {
            State::Done => Ok(ArpaDocument { orders: self.orders }),
            State::Preamble => Err(Error::parse(line_no + 1, "missing \\data\\ header")),
            _ => Err(Error::parse(line_no + 1, "missing \\end\\ marker")),
        }
    }

    fn header_line(&mut self, rest: &str, line_no: usize) -> Result<()> {
        let (order, count) = rest
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("malformed ngram count line {rest:?}")))?;
        let order: usize = order
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("malformed order {order:?}")))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("malformed count {count:?}")))?;
        if order != self.declared.len() + 1 {
            return Err(Error::parse(
                line_no,
                format!("ngram counts out of sequence: expected order {}", self.declared.len() + 1),
            ));
        }
        self.declared.push(count);
        self.orders.push(Vec::new());
        self.seen.push(HashSet::new());
        Ok(())
    }

    /// Handles `\k-grams:` and `\end\`, enforcing section order.
    fn section_start(&mut self, text: &str, line_no: usize) -> Result<State> {
        let expected = self.next_section();
        if text == "\\end\\" {
            if expected <= self.declared.len() {
                return Err(Error::parse(
                    line_no,
                    format!("missing \\{expected}-grams: section"),
                ));
            }
            return Ok(State::Done);
        }
        let k: Option<usize> = text
            .strip_prefix('\\')
            .and_then(|t| t.strip_suffix("-grams:"))
            .and_then(|t| t.parse().ok());
        match k {
            Some(k) if k == expected && k <= self.declared.len() => Ok(State::Section(k)),
            Some(k) if k > self.declared.len() => Err(Error::parse(
                line_no,
                format!("section for order {k} not declared in header"),
            )),
            Some(_) => Err(Error::parse(
                line_no,
                format!("missing \\{expected}-grams: section"),
            )),
            None => Err(Error::parse(line_no, format!("unexpected line {text:?}"))),
        }
    }

    fn next_section(&self) -> usize {
        self.completed + 1
    }

    fn check_count(&mut self, k: usize, line_no: usize) -> Result<()> {
        let found = self.orders[k - 1].len();
        let declared = self.declared[k - 1];
        if found != declared {
            return Err(Error::parse(
                line_no,
                format!("order {k}: header declares {declared} entries but section has {found}"),
            ));
        }
        self.completed = k;
        Ok(())
    }

    fn entry_line(&mut self, k: usize, text: &str, line_no: usize) -> Result<()> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != k + 1 && fields.len() != k + 2 {
            return Err(Error::parse(
                line_no,
                format!("order {k}: expected {} or {} fields, found {}", k + 1, k + 2, fields.len()),
            ));
        }
        let number = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::parse(line_no, format!("malformed number {s:?}")))
        };
        let log_prob = number(fields[0])?;
        let words: Vec<String> = fields[1..=k].iter().map(|w| w.to_string()).collect();
        let backoff = fields.get(k + 1).map(|s| number(s)).transpose()?;
        if !self.seen[k - 1].insert(words.clone()) {
            return Err(Error::parse(
                line_no,
                format!("duplicate {k}-gram {:?}", words.join(" ")),
            ));
        }
        self.orders[k - 1].push(ArpaEntry {
            log_prob,
            words,
            backoff,
        });
        Ok(())
    }
}
