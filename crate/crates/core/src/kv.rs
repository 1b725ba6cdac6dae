//! Plain-text `key = value` files. `#` starts a comment; blank lines are
//! ignored; keys are case-sensitive and may appear once.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(Error::Config {
                    line,
                    msg: format!("expected `key = value`, got `{content}`"),
                });
            };
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(Error::Config {
                    line,
                    msg: "empty key".into(),
                });
            }
            if entries.insert(key.clone(), (line, v.trim().to_string())).is_some() {
                return Err(Error::Config {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(KeyValues { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    fn err(&self, key: &str, msg: String) -> Error {
        Error::Config {
            line: self.line_of(key),
            msg,
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| self.err(key, format!("`{key}`: not a number: `{v}`")))
            })
            .transpose()
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        self.get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| self.err(key, format!("`{key}`: not an integer: `{v}`")))
            })
            .transpose()
    }

    /// Comma- or whitespace-separated numbers.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| parse_numbers(v).map_err(|m| self.err(key, format!("`{key}`: {m}"))))
            .transpose()
    }

    /// Rows separated by `;`, entries by commas or whitespace.
    pub fn matrix(&self, key: &str) -> Result<Option<Vec<Vec<f64>>>> {
        self.get(key)
            .map(|v| {
                v.split(';')
                    .filter(|r| !r.trim().is_empty())
                    .map(parse_numbers)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|m| self.err(key, format!("`{key}`: {m}")))
            })
            .transpose()
    }

    pub fn reject_unknown(&self, known: &[&str]) -> Result<()> {
        for k in self.keys() {
            if !known.contains(&k) {
                return Err(self.err(k, format!("unknown key `{k}`")));
            }
        }
        Ok(())
    }
}

fn parse_numbers(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: `{t}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_and_comments() {
        let kv = KeyValues::parse("# model\nmeans = 0.9, 0.8 0.3\n\nsigma=0.5 # trailing\nfeatures = 1 0; 0 1\n").unwrap();
        assert_eq!(kv.f64_list("means").unwrap().unwrap(), vec![0.9, 0.8, 0.3]);
        assert_eq!(kv.f64("sigma").unwrap(), Some(0.5));
        assert_eq!(kv.matrix("features").unwrap().unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(kv.f64("missing").unwrap(), None);
    }

    #[test]
    fn reports_line_numbers() {
        let e = KeyValues::parse("a = 1\nbogus line\n").unwrap_err();
        assert_eq!(e, Error::Config { line: 2, msg: "expected `key = value`, got `bogus line`".into() });
        let kv = KeyValues::parse("a = 1\nb = x\n").unwrap();
        assert!(matches!(kv.f64("b"), Err(Error::Config { line: 2, .. })));
        assert!(KeyValues::parse("a = 1\na = 2").is_err());
        assert!(kv.reject_unknown(&["a"]).is_err());
    }
}
