//! Filename templates such as `t{counter}.{ext}` or `cam_{Y}{m}{d}_{H}{M}{S}.jpg`.
//!
//! Placeholders:
//!
//! | token       | matches                                         |
//! |-------------|-------------------------------------------------|
//! | `{counter}` | decimal frame counter                           |
//! | `{Y}` `{m}` `{d}` `{H}` `{M}` `{S}` | zero-padded date/time fields |
//! | `{iso}`     | ISO-8601 date-time, basic or extended, optional `Z` |
//! | `{*}`       | any text                                        |
//! | `{ext}`     | `jpg`, `jpeg` or `png`, any case                |
//!
//! Everything else is literal.

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use regex::Regex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSource {
    /// Date-time fields embedded in the name.
    Embedded,
    /// `start + counter × interval`.
    Counter,
    /// Filename order; the rank acts as the counter.
    NameOrder,
}

#[derive(Debug, Clone)]
pub struct FilenameTemplate {
    source: String,
    regex: Regex,
    time_source: TimeSource,
}

/// What a file name yielded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parsed {
    Time(DateTime<Utc>),
    Counter(u64),
    Unordered,
}

const DATE_FIELDS: [&str; 6] = ["Y", "m", "d", "H", "M", "S"];

impl FilenameTemplate {
    pub fn parse(template: &str) -> Result<Self, String> {
        let mut pattern = String::from("^");
        let mut fields = Vec::new();
        let mut rest = template;
        while let Some(open) = rest.find('{') {
            pattern.push_str(&regex::escape(&rest[..open]));
            let close = rest[open..]
                .find('}')
                .ok_or_else(|| format!("unclosed '{{' in template {template:?}"))?
                + open;
            let name = &rest[open + 1..close];
            let piece = match name {
                "counter" => r"(?P<counter>\d+)".to_string(),
                "Y" => r"(?P<Y>\d{4})".to_string(),
                "m" | "d" | "H" | "M" | "S" => format!(r"(?P<{name}>\d{{2}})"),
                "iso" => r"(?P<iso>\d{4}-?\d{2}-?\d{2}[T_ ]?\d{2}[-:]?\d{2}[-:]?\d{2}Z?)".to_string(),
                "*" => ".*?".to_string(),
                "ext" => r"(?i:jpe?g|png)".to_string(),
                other => return Err(format!("unknown placeholder {{{other}}} in {template:?}")),
            };
            if name != "*" && name != "ext" {
                if fields.contains(&name) {
                    return Err(format!("placeholder {{{name}}} repeated in {template:?}"));
                }
                fields.push(name);
            }
            pattern.push_str(&piece);
            rest = &rest[close + 1..];
        }
        pattern.push_str(&regex::escape(rest));
        pattern.push('$');

        let n_date = DATE_FIELDS.iter().filter(|f| fields.contains(f)).count();
        let has_iso = fields.contains(&"iso");
        let time_source = if has_iso || n_date == DATE_FIELDS.len() {
            TimeSource::Embedded
        } else if n_date > 0 {
            return Err(format!(
                "template {template:?} names only some of {{Y}}{{m}}{{d}}{{H}}{{M}}{{S}}"
            ));
        } else if fields.contains(&"counter") {
            TimeSource::Counter
        } else {
            TimeSource::NameOrder
        };
        let regex = Regex::new(&pattern).map_err(|e| e.to_string())?;
        Ok(Self {
            source: template.to_string(),
            regex,
            time_source,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    pub fn time_source(&self) -> TimeSource {
        self.time_source
    }

    /// `None` if the name does not match; `Some(Err)` if it matches but
    /// the embedded timestamp is invalid.
    pub fn match_name(&self, name: &str) -> Option<Result<Parsed, String>> {
        let caps = self.regex.captures(name)?;
        Some(match self.time_source {
            TimeSource::Embedded => {
                let digits: String = if let Some(iso) = caps.name("iso") {
                    iso.as_str().chars().filter(char::is_ascii_digit).collect()
                } else {
                    DATE_FIELDS.iter().map(|f| &caps[*f]).collect()
                };
                datetime_from_digits(&digits).map(Parsed::Time)
            }
            TimeSource::Counter => caps["counter"]
                .parse::<u64>()
                .map(Parsed::Counter)
                .map_err(|e| e.to_string()),
            TimeSource::NameOrder => Ok(Parsed::Unordered),
        })
    }
}

/// `YYYYmmddHHMMSS` to UTC.
fn datetime_from_digits(d: &str) -> Result<DateTime<Utc>, String> {
    if d.len() != 14 {
        return Err(format!("expected 14 date-time digits, got {d:?}"));
    }
    let n = |r: std::ops::Range<usize>| d[r].parse::<u32>().expect("digits");
    let date = NaiveDate::from_ymd_opt(n(0..4) as i32, n(4..6), n(6..8))
        .ok_or_else(|| format!("invalid date in {d:?}"))?;
    let dt = date
        .and_hms_opt(n(8..10), n(10..12), n(12..14))
        .ok_or_else(|| format!("invalid time in {d:?}"))?;
    Ok(Utc.from_utc_datetime(&dt))
}
