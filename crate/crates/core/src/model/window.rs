use chrono::{DateTime, NaiveDate, NaiveDateTime, NaiveTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type Timestamp = DateTime<Utc>;

pub const SECONDS_PER_DAY: i64 = 86_400;
pub const SECONDS_PER_HOUR: i64 = 3_600;

/// Inclusive range of UTC days under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationWindow {
    pub start_day: NaiveDate,
    pub end_day: NaiveDate,
}

impl ObservationWindow {
    pub fn new(start_day: NaiveDate, end_day: NaiveDate) -> Result<Self, Error> {
        if start_day > end_day {
            return Err(Error::Config(format!(
                "window start {start_day} is after end {end_day}"
            )));
        }
        Ok(ObservationWindow { start_day, end_day })
    }

    /// Window of `day_count` days starting at `start_day`.
    pub fn with_days(start_day: NaiveDate, day_count: u32) -> Result<Self, Error> {
        if day_count == 0 {
            return Err(Error::Config("window needs at least one day".into()));
        }
        let end = start_day + chrono::Days::new(u64::from(day_count) - 1);
        Self::new(start_day, end)
    }

    /// Default mainnet window: 2018-06-09 .. 2019-05-31.
    pub fn mainnet() -> Self {
        ObservationWindow {
            start_day: NaiveDate::from_ymd_opt(2018, 6, 9).unwrap(),
            end_day: NaiveDate::from_ymd_opt(2019, 5, 31).unwrap(),
        }
    }

    pub fn day_count(&self) -> u32 {
        (self.end_day - self.start_day).num_days() as u32 + 1
    }

    pub fn start(&self) -> Timestamp {
        self.start_day.and_time(NaiveTime::MIN).and_utc()
    }

    /// Exclusive upper bound (midnight after `end_day`).
    pub fn end(&self) -> Timestamp {
        self.start() + chrono::Duration::days(i64::from(self.day_count()))
    }

    pub fn contains(&self, ts: &Timestamp) -> bool {
        *ts >= self.start() && *ts < self.end()
    }

    /// Signed day offset of `ts` from the window start; may fall outside the window.
    pub fn day_offset(&self, ts: &Timestamp) -> i64 {
        (ts.timestamp() - self.start().timestamp()).div_euclid(SECONDS_PER_DAY)
    }

    /// UTC-midnight aligned day index, or `None` outside the window.
    pub fn day_index(&self, ts: &Timestamp) -> Option<u32> {
        self.contains(ts).then(|| self.day_offset(ts) as u32)
    }

    /// Calendar-aligned UTC hour index, or `None` outside the window.
    pub fn hour_index(&self, ts: &Timestamp) -> Option<u32> {
        self.contains(ts).then(|| {
            ((ts.timestamp() - self.start().timestamp()) / SECONDS_PER_HOUR) as u32
        })
    }

    pub fn day_start(&self, day: u32) -> Timestamp {
        self.start() + chrono::Duration::days(i64::from(day))
    }

    pub fn hour_start(&self, hour: u32) -> Timestamp {
        self.start() + chrono::Duration::hours(i64::from(hour))
    }
}

/// Parse an ISO-8601 timestamp. Offsets are converted to UTC; a missing
/// offset is read as UTC. Sub-second digits are truncated.
pub fn parse_timestamp(s: &str) -> Result<Timestamp, Error> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.with_timezone(&Utc).trunc_subsecs(0));
    }
    NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f")
        .map(|n| n.and_utc().trunc_subsecs(0))
        .map_err(|_| Error::InvalidRecord(format!("bad timestamp {s:?}")))
}

pub fn format_timestamp(ts: &Timestamp) -> String {
    ts.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

/// Serde adapter writing second-resolution `YYYY-MM-DDTHH:MM:SSZ`.
pub mod ts_format {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_timestamp, parse_timestamp, Timestamp};

    pub fn serialize<S: Serializer>(ts: &Timestamp, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_timestamp(ts))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Timestamp, D::Error> {
        let raw = String::deserialize(d)?;
        parse_timestamp(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mainnet_window_is_357_days() {
        assert_eq!(ObservationWindow::mainnet().day_count(), 357);
    }

    #[test]
    fn day_and_hour_indices_are_utc_aligned() {
        let w = ObservationWindow::mainnet();
        let t = parse_timestamp("2018-06-10T00:59:59Z").unwrap();
        assert_eq!(w.day_index(&t), Some(1));
        assert_eq!(w.hour_index(&t), Some(24));
        let before = parse_timestamp("2018-06-08T23:59:59Z").unwrap();
        assert_eq!(w.day_index(&before), None);
        assert_eq!(w.day_offset(&before), -1);
        let last = parse_timestamp("2019-05-31T23:59:59Z").unwrap();
        assert_eq!(w.day_index(&last), Some(356));
        let after = parse_timestamp("2019-06-01T00:00:00Z").unwrap();
        assert_eq!(w.day_index(&after), None);
    }

    #[test]
    fn timestamps_accept_offsets_and_naive() {
        let a = parse_timestamp("2018-06-09T08:00:00+08:00").unwrap();
        let b = parse_timestamp("2018-06-09T00:00:00.500").unwrap();
        assert_eq!(a, b);
        assert_eq!(format_timestamp(&a), "2018-06-09T00:00:00Z");
    }

    #[test]
    fn rejects_inverted_window() {
        let d = NaiveDate::from_ymd_opt(2018, 6, 9).unwrap();
        assert!(ObservationWindow::new(d, d.pred_opt().unwrap()).is_err());
    }
}
