//! Writes the synthetic fixed-width catalog used by the tests and README.
//!
//! cargo run -p spacelife --example gen_satcat_fixture -- crates/core/data/satcat_snapshot.txt
//!
//! Ended objects follow a mean-lifespan trend by end year; objects still in
//! orbit are added so the status mix resembles a recent public catalog. A few
//! malformed lines exercise the reject path. Output is fixed by the seed.

use std::fmt::Write as _;
use std::fs;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

const SEED: u64 = 19_571_004;
const FIRST_END_YEAR: i32 = 1957;
const LAST_END_YEAR: i32 = 2018;
const IN_ORBIT_SHARE: f64 = 0.4268;
const REENTERED_SHARE: f64 = 0.5157;
const UNDATED_REENTRIES: usize = 5;
const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];
const OWNERS: [(&str, u32); 7] = [
    ("US", 40),
    ("CIS", 35),
    ("PRC", 8),
    ("FR", 4),
    ("JPN", 4),
    ("ESA", 4),
    ("IND", 5),
];
const OTHER_ENDED: [&str; 3] = ["L", "E", "X"];

#[derive(Clone)]
struct Object {
    launch: (i32, u32),
    owner: &'static str,
    status: &'static str,
    status_date: Option<(i32, u32)>,
}

fn ended_in(year: i32) -> usize {
    match year {
        1957 => 1,
        1958 => 3,
        1959 => 5,
        1960 => 8,
        _ => 20 + (10.0 * (1.0 - (-(f64::from(year - 1961)) / 3.0).exp2())).round() as usize,
    }
}

fn mean_lifespan(end_year: i32) -> f64 {
    0.549 * (f64::from(end_year - FIRST_END_YEAR) / 12.17).exp2()
}

fn days_in(year: i32) -> u32 {
    if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 {
        366
    } else {
        365
    }
}

fn format_date(year: i32, ordinal: u32) -> String {
    let leap = days_in(year) == 366;
    let lengths = [31, if leap { 29 } else { 28 }, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    let mut day = ordinal;
    for (month, len) in lengths.iter().enumerate() {
        if day <= *len {
            return format!("{year} {} {day:>2}", MONTHS[month]);
        }
        day -= len;
    }
    unreachable!("ordinal within year")
}

fn owner(rng: &mut ChaCha8Rng) -> &'static str {
    let total: u32 = OWNERS.iter().map(|o| o.1).sum();
    let mut pick = rng.random_range(0..total);
    for (name, weight) in OWNERS {
        if pick < weight {
            return name;
        }
        pick -= weight;
    }
    unreachable!()
}

fn line(id: usize, name: &str, owner: &str, launch: &str, status: &str, status_date: &str) -> String {
    format!(
        "{:<8}{name:<26}{owner:<6}{launch:<13}{status:<4}{status_date}",
        format!("{id:05}")
    )
    .trim_end()
    .to_string()
}

fn main() {
    let out = std::env::args()
        .nth(1)
        .expect("usage: gen_satcat_fixture <output path>");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ended = Vec::new();
    for end_year in FIRST_END_YEAR..=LAST_END_YEAR {
        let poisson = Poisson::new(mean_lifespan(end_year)).expect("positive mean");
        for _ in 0..ended_in(end_year) {
            let max_age = end_year - FIRST_END_YEAR;
            let age = (poisson.sample(&mut rng) as i32).min(max_age);
            let launch_year = end_year - age;
            let mut launch_day = rng.random_range(1..=days_in(launch_year));
            let mut end_day = rng.random_range(1..=days_in(end_year));
            if age == 0 && end_day < launch_day {
                std::mem::swap(&mut launch_day, &mut end_day);
            }
            ended.push(Object {
                launch: (launch_year, launch_day),
                owner: owner(&mut rng),
                status: "R",
                status_date: Some((end_year, end_day)),
            });
        }
    }

    let total = (ended.len() as f64 / (1.0 - IN_ORBIT_SHARE)).round() as usize;
    let reentered = (REENTERED_SHARE * total as f64).round() as usize;
    let in_orbit = total - ended.len();
    ended.shuffle(&mut rng);
    for (i, obj) in ended.iter_mut().enumerate() {
        if i >= reentered {
            obj.status = OTHER_ENDED[i % OTHER_ENDED.len()];
        } else if i < UNDATED_REENTRIES {
            obj.status_date = None;
        }
    }

    let mut objects = ended;
    for i in 0..in_orbit {
        // weighted toward recent launches
        let age = (-(1.0 - rng.random::<f64>()).log2() * 10.0) as i32;
        let year = (LAST_END_YEAR - age).max(FIRST_END_YEAR + 1);
        let day = rng.random_range(1..=days_in(year));
        let status_date = (i % 25 == 0 && year < LAST_END_YEAR).then(|| (LAST_END_YEAR, rng.random_range(1..=365)));
        objects.push(Object {
            launch: (year, day),
            owner: owner(&mut rng),
            status: if i % 3 == 0 { "AO" } else { "O" },
            status_date,
        });
    }
    objects.sort_by_key(|o| o.launch);

    let mut text = String::new();
    writeln!(
        text,
        "# Synthetic satellite catalog in fixed-width layout (columns: satcat_columns.toml)."
    )
    .unwrap();
    writeln!(
        text,
        "# Generated by examples/gen_satcat_fixture.rs, seed {SEED}. Not real catalog data."
    )
    .unwrap();
    for (i, obj) in objects.iter().enumerate() {
        let id = i + 1;
        let launch = format_date(obj.launch.0, obj.launch.1);
        let status_date = obj.status_date.map(|(y, d)| format_date(y, d)).unwrap_or_default();
        writeln!(
            text,
            "{}",
            line(
                id,
                &format!("OBJECT {id}"),
                obj.owner,
                &launch,
                obj.status,
                &status_date
            )
        )
        .unwrap();
    }
    let next = objects.len() + 1;
    let malformed = [
        line(next, "BAD LAUNCH", "US", "1962 Foo 12", "R", "1963 Jan  1"),
        line(next + 1, "ENDS BEFORE LAUNCH", "CIS", "1970 Jun  1", "R", "1969 Jun  1"),
        format!(
            "{:<8}{:<26}{:<6}1975 Mar  3",
            format!("{:05}", next + 2),
            "TRUNCATED",
            "US"
        ),
        line(next + 3, "NO LAUNCH", "US", "", "R", "1980 Jan  1"),
        line(next + 4, "BAD STATUS DATE", "PRC", "1990 Jan  5", "R", "1991 Abc  1"),
    ];
    for bad in malformed {
        writeln!(text, "{bad}").unwrap();
    }
    fs::write(&out, text).expect("write fixture");
    eprintln!(
        "wrote {} objects ({} ended, {} in orbit) to {out}",
        objects.len(),
        total - in_orbit,
        in_orbit
    );
}
