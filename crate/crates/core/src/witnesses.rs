//! The W values quoted in the proof of the final Belyi classification, kept
//! as a plain-text table so that the CLI can also evaluate a table supplied
//! from a file.
//!
//! Format: one row per line, `item p d e x y value`, blank lines and `#`
//! comments ignored.

use serde::Serialize;

use crate::criteria::{w_value, ExponentPair};
use crate::error::{Error, Result};
use crate::qz::{Prime, QzClass, Rational};

pub const WITNESS_TABLE: &str = "\
# item p d e x y W
1  3 7   21  1/8    1/2    5/4
2  2 13  4   19/255 4/15   11/8
2  3 7   3   11/80  3/8    11/8
4  2 5   3   1/7    1/7    4/3
4  2 5   6   1/7    4/7    4/3
4  2 171 34  1/7    2/7    4/3
4  2 3   10  3/31   8/31   7/5
4  2 5   8   3/31   8/31   7/5
4  2 9   4   3/31   8/31   7/5
4  2 9   2   3/31   2/31   7/5
4  2 33  172 5/31   2/31   7/5
4  2 9   11  5/63   37/63  4/3
4  2 9   13  3/63   3/63   4/3
4  2 9   34  3/63   3/63   4/3
4  2 11  2   5/63   2/63   4/3
4  2 9   17  3/31   16/31  7/5
4  2 9   48  3/31   16/31  7/5
4  2 9   43  3/31   1/31   7/5
4  2 205 36  1/31   1/31   7/5
4  2 11  13  1/15   9/15   5/4
4  2 11  57  1/15   8/15   5/4
4  2 13  44  1/15   12/15  5/4
4  2 13  228 1/15   1/15   5/4
4  2 33  208 1/15   1/15   5/4
4  2 65  176 1/15   1/15   5/4
9  2 129 3   5/31   9/31   7/5
10 2 5   12  19/127 69/127 10/7
19 2 1   10  3/31   2/31   7/5
22 3 5   7   1/8    1/2    5/4
22 3 10  63  1/8    1/8    5/4
22 3 28  45  1/8    1/8    5/4
22 3 61  12  1/8    1/8    5/4
22 3 2   5   4/26   2/26   4/3
22 3 4   10  2/26   2/26   4/3
24 3 4   6   11/80  3/8    11/8
29 3 2   12  2/13   2/13   4/3
34 5 1   6   7/24   1/24   11/8
34 5 2   5   7/24   1/24   11/8
34 5 6   7   1/4    1/4    5/4
34 5 6   15  1/4    1/4    5/4
34 5 3   7   1/4    1/2    5/4
37 7 2   2   1/3    1/3    4/3
";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    /// Item of the candidate list whose pairs the row rules out.
    pub item: u32,
    pub p: Prime,
    pub pair: ExponentPair,
    pub x: QzClass,
    pub y: QzClass,
    #[serde(with = "crate::serde_ratio")]
    pub quoted: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    #[serde(flatten)]
    pub row: WitnessRow,
    #[serde(with = "crate::serde_ratio")]
    pub computed: Rational,
    pub matches: bool,
    /// Whether the quoted value is below `3/2`.
    pub violation: bool,
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("witness table line {line}: {msg}"))
}

pub fn parse_table(text: &str) -> Result<Vec<WitnessRow>> {
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 7 {
            return Err(bad(k + 1, format!("expected 7 fields, got {}", f.len())));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|e| bad(k + 1, e));
        let p = Prime::new(int(f[1])?)?;
        let pair = ExponentPair::new(int(f[2])?, int(f[3])?)?;
        let x: QzClass = f[4].parse()?;
        let y: QzClass = f[5].parse()?;
        let quoted = crate::serde_ratio::parse(f[6]).ok_or_else(|| bad(k + 1, "bad value"))?;
        rows.push(WitnessRow {
            item: int(f[0])? as u32,
            p,
            pair,
            x,
            y,
            quoted,
        });
    }
    Ok(rows)
}

pub fn builtin_rows() -> Vec<WitnessRow> {
    parse_table(WITNESS_TABLE).expect("built-in table parses")
}

pub fn check_row(row: &WitnessRow) -> Result<RowCheck> {
    let computed = w_value(row.p, row.pair, &row.x, &row.y)?;
    Ok(RowCheck {
        row: row.clone(),
        computed,
        matches: computed == row.quoted,
        violation: row.quoted < Rational::new(3, 2),
    })
}

pub fn check_table(rows: &[WitnessRow]) -> Result<Vec<RowCheck>> {
    rows.iter().map(check_row).collect()
}
