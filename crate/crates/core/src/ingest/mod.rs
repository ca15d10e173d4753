//! Turning raw catalogs and mission lists into [`LifespanRecord`](crate::LifespanRecord)s.

mod missions;
mod normalized;
mod satcat;

pub use missions::{filter_by_operator, load_mission_csv, load_mission_csv_path};
pub use normalized::{read_records_csv, write_records_csv, write_rejects_csv, NORMALIZED_COLUMNS};
pub use satcat::{
    filter_satellite_lifespans, parse_satcat, parse_satcat_date, ColumnRange, Reject, SatcatColumnSpec, SatcatField,
    SatcatParse, SatcatRecord, SatelliteFilter, StatusBreakdown, StatusClass, StatusMapping, MAX_REJECT_FRACTION,
};
