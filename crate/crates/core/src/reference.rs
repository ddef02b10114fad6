//! Published reference values: `W_1^l` for `l ≤ 6`, `m_{2p}` for `p ≤ 10`
//! and `ρ̃_l` for `l ≤ 6`, in the plain-text expression syntax.

use std::collections::BTreeMap;

use crate::arith::{MultiPoly, Rational};
use crate::density::{HalfGPoly, SmoothedDensity};
use crate::moments::MomentPoly;
use crate::spectral::SpectralExpr;

pub const RESOLVENT: [&str; 7] = [
    "(x - y)/2",
    "h/2 (1/y - x/y^2)",
    "h^2 (-x/y^4 + (x^2 + g)/y^5) + g/y^5",
    "5 h^3 ((x^2 + g)/y^7 - (x^3 + 2 g x)/y^8) + h/2 ((x^2 + 6 g)/y^7 - (x^3 + 30 g x)/y^8)",
    "h^4 (-(37 x^3 + 92 g x)/y^10 + (37 x^4 + 123 g x^2 + 21 g^2)/y^11) \
     + h^2 (-(23 x^3 + 180 g x)/(2 y^10) + (23 x^4 + 454 g x^2 + 176 g^2)/(2 y^11)) \
     + 21 g (x^2 + g)/y^11",
    "h^5 ((353 x^4 + 1527 g x^2 + 399 g^2)/y^13 - (353 x^5 + 1766 g x^3 + 848 g^2 x)/y^14) \
     + h^3 ((445 x^4 + 4332 g x^2 + 1512 g^2)/(2 y^13) - (445 x^5 + 7714 g x^3 + 7440 g^2 x)/(2 y^14)) \
     + h (21 (x^4 + 20 g x^2 + 14 g^2)/(2 y^13) - 3 (7 x^5 + 628 g x^3 + 1200 g^2 x)/(2 y^14))",
    "h^6 (-(4081 x^5 + 26392 g x^3 + 18976 g^2 x)/y^16 + (4081 x^6 + 28625 g x^4 + 26832 g^2 x^2 + 1738 g^3)/y^17) \
     + h^4 (-(8567 x^5 + 101288 g x^3 + 93600 g^2 x)/(2 y^16) + (8567 x^6 + 147556 g x^4 + 243180 g^2 x^2 + 31236 g^3)/(2 y^17)) \
     + h^2 (-(618 x^5 + 13104 g x^3 + 18000 g^2 x)/y^16 + (618 x^6 + 32043 g x^4 + 91299 g^2 x^2 + 16834 g^3)/y^17) \
     + 11 g (135 x^4 + 558 g x^2 + 158 g^2)/y^17",
];

/// `m_{2p}` in `N` and `k = 1/κ`.
pub const MOMENTS: [&str; 11] = [
    "N",
    "N^2+N (-1+k^1)",
    "2 N^3+5N^2 (-1+k^1)+N (3-5k^1+3k^2)",
    "5 N^4+22 N^3 (-1+k^1)+N^2 (32-54k^1+32k^2) +N(-15+32k^1-32k^2+15k^3)",
    "14 N^5+93 N^4 (-1+k^1)+N^3 (234-398k^1+234k^2) +N^2(-260+565k^1-565k^2+260k^3) +N(105-260k^1+331k^2-260k^3+105k^4)",
    "42 N^6+386 N^5 (-1+k^1)+10 N^4(145-248k^1+145k^2) +550 N^3(-5+11k^1-11k^2+5k^3) +N^2(2589-6545k^1+8395k^2-6545k^3+2589k^4) +N(-945+2589k^1-3795k^2+3795k^3-2589k^4+945k^5)",
    "132 N^7+1586 N^6(-1+k^1)+N^5 (8178-14046k^1+8178k^2) +N^4(-22950+50945k^1-50945k^2+22950k^3) +4 N^3(9125-23403k^1+30173k^2-23403k^3+9125k^4) +N^2(-30669+85796k^1-127221k^2+127221k^3-85796k^4+30669k^5) +3 N(3465-10223k^1+16432k^2-18853k^3+16432k^4-10223k^5+3465k^6)",
    "429 N^8-6476 N^7 (-k^1+1)+28 N^6 (1550k^2-2671k^1+1550) -14 N^5 (-11865k^3+26521k^2-26521k^1+11865) +7 N^4 (55448k^4-143753k^3+186048k^2-143753k^1+55448) -14 N^3 (-39034k^5+110855k^4-165733k^3+165733k^2-110855k^1+39034) +N^2 (422232k^6-1270913k^5+2070257k^4-2386524k^3+2070257k^2-1270913k^1+422232) +N (135135k^7-422232k^6+724437k^5-906423k^4+906423k^3-724437k^2+422232k^1-135135)",
    "1430 N^9-26333 N^8 (-k^1+1)+4 N^7 (55177k^2-95339k^1+55177) -14 N^6 (-78040k^3+175407k^2-175407k^1+78040) +N^5 (3463634k^4-9056368k^3+11756038k^2-9056368k^1+3463634) +N^4 (7123780k^5-20466843k^4+30790276k^3-30790276k^2+20466843k^1-7123780) +N^3 (9163236k^6-27995000k^5+46050702k^4-53268136k^3 +46050702k^2-27995000k^1+9163236) +N^2 (6633360k^7-21117210k^6+36735448k^5-46305896k^4 +46305896k^3-36735448k^2+21117210k^1-6633360) +3 N (675675k^8-2211120k^7+3984658k^6-5288076k^5+5752801k^4 -5288076k^3+3984658k^2-2211120k^1+675675)",
    "4862 N^10-106762 N^9 (-k^1+1)+6 N^8 (181261k^2-313902k^1+181261) -60 N^7 (-111789k^3+252415k^2-252415k^1+111789) +N^6 (27391174k^4-72116946k^3+93841930k^2-72116946k^1+27391174) -6 N^5 (-12684669k^5+36783020k^4-55611546k^3+55611546k^2-36783020k^1+12684669) +N^4 (142341934k^6-439988319k^5+729284620k^4 -845821890k^3+729284620k^2-439988319k^1+142341934) -10 N^3 (-17063718k^7+55103324k^6-96859509k^5+122769969k^4 -122769969k^3+96859509k^2-55103324k^1+17063718) +N^2 (117193185k^8-390187530k^7+712745500k^6-954191664k^5 +1041198895k^4-954191664k^3+712745500k^2-390187530k^1+117193185) -3 N (-11486475k^9+39064395k^8-73183450k^7+101351398k^6-116492293k^5 +116492293k^4-101351398k^3+73183450k^2-39064395k^1+11486475)",
    "16796 N^11-431910 N^10 (-k^1+1)+10 N^9 (523069k^2-907571k^1+523069) -15 N^8 (-2605750k^3+5906423k^2-5906423k^1+2605750) +8 N^7 (24778268k^4-65615565k^3+85554470k^2-65615565k^1+24778268) -70 N^6 (-10102057k^5+29519110k^4-44811613k^3+44811613k^2-29519110k^1+10102057) +2 N^5 (890196239k^6-2777967945k^5 +4632873326k^4-5384661375k^3+4632873326k^2-2777967945k^1+890196239) -5 N^4 (-618257450k^7+2019452031k^6-3579106742k^5 +4556290742k^4-4556290742k^3+3579106742k^2-2019452031k^1+618257450) +2 N^3 (1750159371k^8-5906104210k^7+10901709075k^6-14692250235k^5 +16068813521k^4-14692250235k^3+10901709075k^2-5906104210k^1+1750159371) -5 N^2 (-460192905k^9+1590096591k^8-3017610500k^7+4217705240k^6-4871156831k^5 +4871156831k^4-4217705240k^3+3017610500k^2-1590096591k^1+460192905) +3 N (218243025k^10-766988175k^9+1483388071k^8-2122377110k^7+2533991909k^6 -2672675165k^5+2533991909k^4-2122377110k^3+1483388071k^2-766988175k^1+218243025)",
];

pub fn resolvent(l: usize) -> SpectralExpr {
    RESOLVENT[l].parse().expect("reference resolvent parses")
}

pub fn moment(p: usize) -> MomentPoly {
    let e: SpectralExpr = MOMENTS[p].parse().expect("reference moment parses");
    assert_eq!(e.terms().len(), 1);
    MomentPoly::from_multipoly(p, &e.terms()[&0])
}

/// One published density level: bulk `(1/π) · bulk · (4g − x²)^{exponent/2}`
/// plus `Σ c ε^{(j)}`, with delta rows `(j, h power, num, den, 2 × g power)`.
pub struct DensityFixture {
    pub exponent: i32,
    pub bulk: &'static str,
    pub delta: &'static [(usize, u16, i64, i64, i32)],
}

pub const DENSITIES: [DensityFixture; 7] = [
    DensityFixture { exponent: 1, bulk: "1/2", delta: &[] },
    DensityFixture { exponent: -1, bulk: "h/2", delta: &[(0, 1, -1, 4, 0)] },
    DensityFixture {
        exponent: -5,
        bulk: "h^2 (x^2 + g) + g",
        delta: &[(1, 2, 1, 8, -1)],
    },
    DensityFixture {
        exponent: -7,
        bulk: "-5 h^3 (x^2 + g) - h/2 (x^2 + 6 g)",
        delta: &[
            (1, 3, -5, 512, -3),
            (2, 3, -5, 256, -2),
            (3, 3, -5, 128, -1),
            (1, 1, 13, 1024, -3),
            (2, 1, 13, 512, -2),
            (3, 1, 17, 768, -1),
        ],
    },
    DensityFixture {
        exponent: -11,
        bulk: "-h^4 (37 x^4 + 123 g x^2 + 21 g^2) - h^2/2 (23 x^4 + 454 g x^2 + 176 g^2) - 21 g (x^2 + g)",
        delta: &[
            (1, 4, -1, 2048, -5),
            (2, 4, -1, 1024, -4),
            (3, 4, -1, 96, -3),
            (4, 4, -15, 768, -2),
            (1, 2, -39, 4096, -5),
            (2, 2, -39, 2048, -4),
            (3, 2, -7, 384, -3),
            (4, 2, -17, 1536, -2),
        ],
    },
    DensityFixture {
        exponent: -13,
        bulk: "h^5 (353 x^4 + 1527 g x^2 + 399 g^2) + h^3/2 (445 x^4 + 4332 g x^2 + 1512 g^2) \
               + h/2 (21 x^4 + 420 g x^2 + 294 g^2)",
        delta: &[
            (1, 5, 425, 524288, -7),
            (2, 5, 425, 262144, -6),
            (3, 5, 159, 49152, -5),
            (4, 5, 847, 196608, -4),
            (5, 5, 705, 491520, -3),
            (6, 5, -1695, 737280, -2),
            (1, 3, 3019, 1048576, -7),
            (2, 3, 3019, 524288, -6),
            (3, 3, 157, 98304, -5),
            (4, 3, -1763, 393216, -4),
            (5, 3, -5837, 983040, -3),
            (6, 3, -5677, 1474560, -2),
            (1, 1, -1533, 524288, -7),
            (2, 1, -1533, 262144, -6),
            (3, 1, -327, 49152, -5),
            (4, 1, -1083, 196608, -4),
            (5, 1, -1533, 491520, -3),
            (6, 1, -717, 737280, -2),
        ],
    },
    DensityFixture {
        exponent: -17,
        bulk: "h^6 (4081 x^6 + 28625 g x^4 + 26832 g^2 x^2 + 1738 g^3) \
               + h^4/2 (8567 x^6 + 147556 g x^4 + 243180 g^2 x^2 + 31236 g^3) \
               + h^2 (618 x^6 + 32043 g x^4 + 91299 g^2 x^2 + 16834 g^3) \
               + (1485 g x^4 + 6138 g^2 x^2 + 1738 g^3)",
        delta: &[
            (1, 6, 161, 2097152, -9),
            (2, 6, 161, 1048576, -8),
            (3, 6, 1197, 1572864, -7),
            (4, 6, 259, 196608, -6),
            (5, 6, 1849, 983040, -5),
            (6, 6, 6075, 2949120, -4),
            (7, 6, 11865, 10321920, -3),
            (1, 4, 7987, 4194304, -9),
            (2, 4, 7987, 2097152, -8),
            (3, 4, 27543, 3145728, -7),
            (4, 4, 4889, 393216, -6),
            (5, 4, 20683, 1966080, -5),
            (6, 4, 34305, 5898240, -4),
            (7, 4, 39739, 20643840, -3),
            (1, 2, 10731, 2097152, -9),
            (2, 2, 10731, 1048576, -8),
            (3, 2, 17679, 1572864, -7),
            (4, 2, 1737, 196608, -6),
            (5, 2, 5007, 983040, -5),
            (6, 2, 6033, 2949120, -4),
            (7, 2, 5019, 10321920, -3),
        ],
    },
];

/// Printed delta coefficients that contradict the vanishing moments and the
/// moment polynomials: `(l, j, h power, corrected numerator)`.
pub const DENSITY_ERRATA: [(usize, usize, u16, i64); 1] = [(3, 3, 3, 5)];

fn build_density(l: usize, fix: &DensityFixture, errata: bool) -> SmoothedDensity {
    let bulk: SpectralExpr = fix.bulk.parse().expect("fixture bulk parses");
    assert!(bulk.terms().keys().all(|&s| s == 0));
    let num = bulk
        .terms()
        .get(&0)
        .cloned()
        .unwrap_or_else(MultiPoly::zero);
    let mut delta: BTreeMap<usize, HalfGPoly> = BTreeMap::new();
    for &(j, a, n, d, s) in fix.delta {
        let n = DENSITY_ERRATA
            .iter()
            .find(|e| errata && e.0 == l && e.1 == j && e.2 == a)
            .map_or(n, |e| e.3);
        let slot = delta.entry(j).or_default();
        *slot = slot.add(&HalfGPoly::term(Rational::new(n, d), a, s));
    }
    SmoothedDensity::new(l, [(fix.exponent, num)], delta)
}

/// `ρ̃_l` as displayed, with [`DENSITY_ERRATA`] applied.
pub fn density(l: usize) -> SmoothedDensity {
    build_density(l, &DENSITIES[l], true)
}

/// `ρ̃_l` exactly as printed.
pub fn density_as_printed(l: usize) -> SmoothedDensity {
    build_density(l, &DENSITIES[l], false)
}
