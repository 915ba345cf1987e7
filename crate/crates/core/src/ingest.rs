//! Reading and writing strict complete orders in the PrefLib SOC format.
//!
//! ```text
//! # FILE NAME: example.soc
//! # DATA TYPE: soc
//! # NUMBER ALTERNATIVES: 3
//! # NUMBER VOTERS: 4
//! # NUMBER UNIQUE ORDERS: 2
//! # ALTERNATIVE NAME 1: a
//! # ALTERNATIVE NAME 2: b
//! # ALTERNATIVE NAME 3: c
//! 3: 1,2,3
//! 1: 2,3,1
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::profiles::{Alternative, PreferenceProfile};

/// Caps that keep hostile inputs from exhausting memory.
pub const MAX_ALTERNATIVES: usize = 10_000;
pub const MAX_VOTERS: usize = 5_000_000;
pub const MAX_CELLS: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SocError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: ranking lists {found} of {expected} alternatives")]
    IncompleteRanking { line: usize, expected: usize, found: usize },
    #[error("line {line}: unknown alternative {index}")]
    UnknownAlternative { line: usize, index: String },
    #[error("line {line}: ballot contains ties, which SOC data does not allow")]
    TiedBallot { line: usize },
    #[error("line {line}: malformed ranking: {msg}")]
    MalformedRanking { line: usize, msg: String },
    #[error("line {line}: unsupported data type {found:?}; only soc is accepted")]
    UnsupportedDataType { line: usize, found: String },
    #[error("header {key} declares {declared} but the data has {found}")]
    HeaderMismatch { key: String, declared: usize, found: usize },
    #[error("line {line}: input exceeds size limits")]
    TooLarge { line: usize },
    #[error("document contains no voters")]
    EmptyProfile,
}

/// A parsed SOC file: header metadata plus the profile it describes.
#[derive(Debug, Clone, PartialEq)]
pub struct SocDocument {
    /// Header entries other than the ones derived from the profile, in file
    /// order.
    pub metadata: Vec<(String, String)>,
    pub profile: PreferenceProfile,
}

impl SocDocument {
    pub fn new(profile: PreferenceProfile) -> Self {
        Self {
            metadata: Vec::new(),
            profile,
        }
    }
}

const DERIVED_KEYS: [&str; 4] = ["DATA TYPE", "NUMBER ALTERNATIVES", "NUMBER VOTERS", "NUMBER UNIQUE ORDERS"];
const NAME_PREFIX: &str = "ALTERNATIVE NAME ";

fn parse_count(line: usize, key: &str, value: &str) -> Result<usize, SocError> {
    value.trim().parse().map_err(|_| SocError::Syntax {
        line,
        msg: format!("{key} must be a nonnegative integer"),
    })
}

struct Declared {
    alternatives: Option<usize>,
    voters: Option<usize>,
    unique: Option<usize>,
}

pub fn parse_soc(text: &str) -> Result<SocDocument, SocError> {
    let mut metadata = Vec::new();
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut declared = Declared {
        alternatives: None,
        voters: None,
        unique: None,
    };
    let mut body: Vec<(usize, usize, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('#') {
            let (key, value) = header.split_once(':').ok_or_else(|| SocError::Syntax {
                line,
                msg: "header lines must read `# KEY: VALUE`".into(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(index) = key.strip_prefix(NAME_PREFIX) {
                let index: usize = index.trim().parse().map_err(|_| SocError::Syntax {
                    line,
                    msg: format!("bad alternative index {index:?}"),
                })?;
                if index == 0 || index > MAX_ALTERNATIVES {
                    return Err(SocError::UnknownAlternative {
                        line,
                        index: index.to_string(),
                    });
                }
                if names.insert(index, one_line(value).trim().to_owned()).is_some() {
                    return Err(SocError::Syntax {
                        line,
                        msg: format!("alternative {index} named twice"),
                    });
                }
                continue;
            }
            match key {
                "DATA TYPE" => {
                    if !value.eq_ignore_ascii_case("soc") {
                        return Err(SocError::UnsupportedDataType {
                            line,
                            found: value.to_owned(),
                        });
                    }
                }
                "NUMBER ALTERNATIVES" => {
                    let m = parse_count(line, key, value)?;
                    if m > MAX_ALTERNATIVES {
                        return Err(SocError::TooLarge { line });
                    }
                    declared.alternatives = Some(m);
                }
                "NUMBER VOTERS" => declared.voters = Some(parse_count(line, key, value)?),
                "NUMBER UNIQUE ORDERS" => declared.unique = Some(parse_count(line, key, value)?),
                _ => metadata.push((key.to_owned(), value.to_owned())),
            }
            continue;
        }
        let (count, ranking) = trimmed.split_once(':').ok_or_else(|| SocError::Syntax {
            line,
            msg: "body lines must read `count: i1,i2,...`".into(),
        })?;
        let count: usize = count.trim().parse().map_err(|_| SocError::Syntax {
            line,
            msg: format!("bad multiplicity {:?}", count.trim()),
        })?;
        if count == 0 {
            return Err(SocError::Syntax {
                line,
                msg: "multiplicity must be positive".into(),
            });
        }
        body.push((line, count, ranking));
    }

    let m = declared
        .alternatives
        .or_else(|| names.keys().next_back().copied())
        .or_else(|| body.first().map(|(_, _, r)| r.split(',').count()))
        .ok_or(SocError::EmptyProfile)?;
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(SocError::TooLarge { line: 0 });
    }
    if let Some((&index, _)) = names.iter().find(|(&i, _)| i > m) {
        return Err(SocError::HeaderMismatch {
            key: "NUMBER ALTERNATIVES".into(),
            declared: m,
            found: index,
        });
    }

    let mut rankings: Vec<Vec<Alternative>> = Vec::new();
    let mut voters = 0usize;
    for &(line, count, ranking) in &body {
        let order = parse_ranking(line, ranking, m)?;
        voters = voters.checked_add(count).ok_or(SocError::TooLarge { line })?;
        if voters > MAX_VOTERS || voters.saturating_mul(m) > MAX_CELLS {
            return Err(SocError::TooLarge { line });
        }
        rankings.extend(std::iter::repeat_n(order, count));
    }
    if rankings.is_empty() {
        return Err(SocError::EmptyProfile);
    }
    if let Some(d) = declared.voters {
        if d != voters {
            return Err(SocError::HeaderMismatch {
                key: "NUMBER VOTERS".into(),
                declared: d,
                found: voters,
            });
        }
    }
    if let Some(d) = declared.unique {
        if d != body.len() {
            return Err(SocError::HeaderMismatch {
                key: "NUMBER UNIQUE ORDERS".into(),
                declared: d,
                found: body.len(),
            });
        }
    }

    let labels: Vec<String> = (1..=m).map(|i| names.get(&i).cloned().unwrap_or_else(|| i.to_string())).collect();
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(SocError::Syntax {
                line: 0,
                msg: format!("alternative name {label:?} is used twice"),
            });
        }
    }
    let profile = PreferenceProfile::new(labels, rankings).map_err(|e| SocError::MalformedRanking {
        line: 0,
        msg: e.to_string(),
    })?;
    Ok(SocDocument { metadata, profile })
}

fn parse_ranking(line: usize, text: &str, m: usize) -> Result<Vec<Alternative>, SocError> {
    if text.contains('{') || text.contains('}') {
        return Err(SocError::TiedBallot { line });
    }
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(SocError::Syntax {
                line,
                msg: "empty entry in ranking".into(),
            });
        }
        let index: usize = token.parse().map_err(|_| SocError::Syntax {
            line,
            msg: format!("bad alternative index {token:?}"),
        })?;
        if index == 0 || index > m {
            return Err(SocError::UnknownAlternative {
                line,
                index: token.to_owned(),
            });
        }
        if seen[index - 1] {
            return Err(SocError::MalformedRanking {
                line,
                msg: format!("alternative {index} listed twice"),
            });
        }
        seen[index - 1] = true;
        order.push(index - 1);
    }
    if order.len() != m {
        return Err(SocError::IncompleteRanking {
            line,
            expected: m,
            found: order.len(),
        });
    }
    Ok(order)
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// Canonical SOC text: free-form metadata, then the derived headers and
/// names, then identical rankings merged and listed in lexicographic order.
pub fn write_soc(doc: &SocDocument) -> String {
    let profile = &doc.profile;
    let mut merged: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for ranking in profile.rankings() {
        *merged.entry(ranking.order().iter().map(|x| x + 1).collect()).or_default() += 1;
    }
    let mut out = String::new();
    for (key, value) in &doc.metadata {
        if DERIVED_KEYS.contains(&key.as_str()) || key.starts_with(NAME_PREFIX) {
            continue;
        }
        out.push_str(&format!("# {}: {}\n", one_line(key).replace(':', " "), one_line(value)));
    }
    out.push_str("# DATA TYPE: soc\n");
    out.push_str(&format!("# NUMBER ALTERNATIVES: {}\n", profile.num_alternatives()));
    out.push_str(&format!("# NUMBER VOTERS: {}\n", profile.num_voters()));
    out.push_str(&format!("# NUMBER UNIQUE ORDERS: {}\n", merged.len()));
    for (i, name) in profile.names().iter().enumerate() {
        out.push_str(&format!("# {NAME_PREFIX}{}: {}\n", i + 1, one_line(name).trim()));
    }
    for (order, count) in &merged {
        let list: Vec<String> = order.iter().map(usize::to_string).collect();
        out.push_str(&format!("{count}: {}\n", list.join(",")));
    }
    out
}
