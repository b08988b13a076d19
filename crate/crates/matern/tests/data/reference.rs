// Reference values computed at 50 significant digits with mpmath.
pub const LN_GAMMA: &[(f64, f64)] = &[
    (1e-10, 23.025850929882735274),
    (0.001, 6.9071788853838536825),
    (0.1, 2.2527126517342059599),
    (0.3, 1.0957979948180755217),
    (0.7, 0.26086724653166651439),
    (0.8, 0.15205967839983758878),
    (0.9, 0.066376239734742971189),
    (0.95, 0.030968795237972897041),
    (1.05, -0.02685307250226016808),
    (1.1, -0.049872441259839724148),
    (1.24, -0.095937212174083936253),
    (1.26, -0.10048672543554801435),
    (1.5, -0.12078223763524522235),
    (1.7, -0.095807697407065864527),
    (1.76, -0.081888284708170292826),
    (1.9, -0.038984275923083330039),
    (2.1, 0.045437738544485135896),
    (2.24, 0.11917416744286156047),
    (2.3, 0.15418945495963058109),
    (3.0, 0.69314718055994530942),
    (7.3, 7.1478925230222490328),
    (10.5, 13.940625219403763633),
    (33.3, 82.603723581654952928),
    (99.9, 358.67423945197753761),
    (170.0, 701.43726380873708535),
];
// (nu, x, ln K_nu(x))
pub const LN_BESSEL_K: &[(f64, f64, f64)] = &[
    (0.0, 1e-8, 2.919747817422440053),
    (0.0, 1e-4, 2.232835354453717656),
    (0.0, 0.1, 0.88668436667874214934),
    (0.0, 0.5, -0.078589769869081416895),
    (0.0, 1.9, -2.0491375470578921403),
    (0.0, 2.0, -2.1724882049757099347),
    (0.0, 2.1, -2.2947782370499973123),
    (0.0, 5.0, -5.6018312137170631795),
    (0.0, 10.0, -10.93743282303833292),
    (0.0, 30.0, -31.478906854243695315),
    (0.0, 100.0, -102.07803755445829631),
    (0.0, 300.0, -302.62651585930440769),
    (0.0, 700.0, -703.04992725894391223),
    (0.1, 1e-8, 3.4460786326410467313),
    (0.1, 1e-4, 2.3815173435469747164),
    (0.1, 0.1, 0.9030244871822132914),
    (0.1, 0.5, -0.072477655086122360032),
    (0.1, 1.9, -2.0469722775286448804),
    (0.1, 2.0, -2.1704153460412888597),
    (0.1, 2.1, -2.2927900687793686753),
    (0.1, 5.0, -5.6009145778642460398),
    (0.1, 10.0, -10.936955481306387267),
    (0.1, 30.0, -31.47874287023615659),
    (0.1, 100.0, -102.07798780179685428),
    (0.1, 300.0, -302.62649922031589929),
    (0.1, 700.0, -703.04992012118094444),
    (0.25, 1e-8, 5.3732367229369555999),
    (0.25, 1e-4, 3.0611414716859788467),
    (0.25, 0.1, 0.98773915153386195135),
    (0.25, 0.5, -0.040492543657769392026),
    (0.25, 1.9, -2.0356117478529412441),
    (0.25, 2.0, -2.1595391849082104216),
    (0.25, 2.1, -2.28235786042095923),
    (0.25, 5.0, -5.5961029124181339958),
    (0.25, 10.0, -10.934449541935012456),
    (0.25, 30.0, -31.477881958797755571),
    (0.25, 100.0, -102.07772660045701487),
    (0.25, 300.0, -302.6264118656312437),
    (0.25, 700.0, -703.04988264792576042),
    (0.5, 1e-8, 9.4361317146209101684),
    (0.5, 1e-4, 4.8308615386328188004),
    (0.5, 0.1, 1.2770838991417502744),
    (0.5, 0.5, 0.072364942924700087072),
    (0.5, 1.9, -1.9951355904414699556),
    (0.5, 2.0, -2.1207822376352452223),
    (0.5, 2.1, -2.2451773197199612239),
    (0.5, 5.0, -5.5789276035723227549),
    (0.5, 10.0, -10.92550119385229541),
    (0.5, 30.0, -31.474807338186350255),
    (0.5, 100.0, -102.07679374034931825),
    (0.5, 300.0, -302.6260998846833731),
    (0.5, 700.0, -703.0497488148769749),
    (0.7, 1e-8, 12.947399613122467185),
    (0.7, 1e-4, 6.5001582273150947525),
    (0.7, 0.1, 1.6224528521683555516),
    (0.7, 0.5, 0.21386699849660097639),
    (0.7, 1.9, -1.9435446593267690147),
    (0.7, 2.0, -2.0713680497470023333),
    (0.7, 2.1, -2.1977604956699980837),
    (0.7, 5.0, -5.5569641382392463574),
    (0.7, 10.0, -10.914050577526244646),
    (0.7, 30.0, -31.470871967644770976),
    (0.7, 100.0, -102.07559968356169582),
    (0.7, 300.0, -302.62570054922686333),
    (0.7, 700.0, -703.0495775085869398),
    (1.0, 1e-8, 18.42068074395236452),
    (1.0, 1e-4, 9.2103403228448220249),
    (1.0, 0.1, 2.2878617121071677213),
    (1.0, 0.5, 0.50467139730465117731),
    (1.0, 1.9, -1.8347077662739777223),
    (1.0, 2.0, -1.9670713025605138915),
    (1.0, 2.1, -2.0976347466777362079),
    (1.0, 5.0, -5.5103692965852233155),
    (1.0, 10.0, -10.889730180588070981),
    (1.0, 30.0, -31.462509841343925037),
    (1.0, 100.0, -102.07306232835992423),
    (1.0, 300.0, -302.62485196196620772),
    (1.0, 700.0, -703.04921348276688186),
    (1.3, 1e-8, 24.046654311798198152),
    (1.3, 1e-4, 12.073211819920179055),
    (1.3, 0.1, 3.0862966125400922464),
    (1.3, 0.5, 0.8797208826281975719),
    (1.3, 1.9, -1.6891105953423911722),
    (1.3, 2.0, -1.8274424187204387175),
    (1.3, 2.1, -1.9634987201364654291),
    (1.3, 5.0, -5.4474953716686214805),
    (1.3, 10.0, -10.856852359803523409),
    (1.3, 30.0, -31.451197536351087461),
    (1.3, 100.0, -102.06962946951888925),
    (1.3, 300.0, -302.62370387458454631),
    (1.3, 700.0, -703.04872097734578058),
    (2.5, 1e-8, 47.376105501193750787),
    (2.5, 1e-4, 24.3502545695866273),
    (2.5, 0.1, 7.0792022745188131752),
    (2.5, 0.5, 3.0168039220911405471),
    (2.5, 1.9, -0.7684314225898973653),
    (2.5, 2.0, -0.94212724129359910513),
    (2.5, 2.1, -1.1109265156044928263),
    (2.5, 5.0, -5.0366033127469610807),
    (2.5, 10.0, -10.640322251618633013),
    (2.5, 30.0, -31.376471437465488414),
    (2.5, 100.0, -102.04694371838043295),
    (2.5, 300.0, -302.61611655107447192),
    (2.5, 700.0, -703.04546616180641137),
    (3.49, 1e-8, 67.204070847879805608),
    (3.49, 1e-4, 35.059982948678911805),
    (3.49, 0.1, 10.950913347384374758),
    (3.49, 0.5, 5.3100795475459473139),
    (3.49, 1.9, 0.34359361293068334484),
    (3.49, 2.0, 0.13135997355163623478),
    (3.49, 2.1, -0.073409408353740685391),
    (3.49, 5.0, -4.5134400417426648832),
    (3.49, 10.0, -10.36063473457467529),
    (3.49, 30.0, -31.279379809976784976),
    (3.49, 100.0, -102.01744430943197493),
    (3.49, 300.0, -302.6062496313910349),
    (3.49, 700.0, -703.04123341020144792),
    (5.0, 1e-8, 98.054046272349554212),
    (5.0, 1e-4, 52.002344411843640538),
    (5.0, 0.1, 17.462943082635024667),
    (5.0, 0.5, 9.4007937321946314369),
    (5.0, 1.9, 2.5232448626071998047),
    (5.0, 2.0, 2.2440073418461981624),
    (5.0, 2.1, 1.976265585020972842),
    (5.0, 5.0, -3.4201883628440003858),
    (5.0, 10.0, -9.7629980490662249065),
    (5.0, 30.0, -31.069816472791915068),
    (5.0, 100.0, -101.95368115466478686),
    (5.0, 300.0, -302.58491934252541032),
    (5.0, 700.0, -703.03208292709220838),
    (7.7, 1e-8, 154.40986919445385213),
    (7.7, 1e-4, 83.490248329864110741),
    (7.7, 0.1, 30.300159559958229082),
    (7.7, 0.5, 17.898540011196052379),
    (7.7, 1.9, 7.4951855039625675041),
    (7.7, 2.0, 7.0860172557086235276),
    (7.7, 2.1, 6.6954299939256175543),
    (7.7, 5.0, -0.69297476275292662322),
    (7.7, 10.0, -8.2070089368552038311),
    (7.7, 30.0, -30.511489585329062525),
    (7.7, 100.0, -101.78319595677137867),
    (7.7, 300.0, -302.5278686656018073),
    (7.7, 700.0, -703.00760788742731685),
    (12.3, 1e-8, 252.64591969803371924),
    (12.3, 1e-4, 139.35873312250543265),
    (12.3, 0.1, 54.393121954684309223),
    (12.3, 0.5, 34.591727378711870641),
    (12.3, 1.9, 18.097182655981697521),
    (12.3, 2.0, 17.457716088396956782),
    (12.3, 2.1, 16.848606604550922492),
    (12.3, 5.0, 5.7361604144321525657),
    (12.3, 10.0, -4.277190527321046319),
    (12.3, 30.0, -29.028730975334266459),
    (12.3, 100.0, -101.32625133134067794),
    (12.3, 300.0, -302.37481955458086487),
    (12.3, 700.0, -702.94194281114855961),
    (20.0, 1e-8, 420.92329549688576436),
    (20.0, 1e-4, 236.71648805723053069),
    (20.0, 0.1, 98.561250899252912417),
    (20.0, 0.5, 66.369335055848886154),
    (20.0, 1.9, 39.625165335788222666),
    (20.0, 2.0, 38.594182058734037957),
    (20.0, 2.1, 37.61300051389941615),
    (20.0, 5.0, 19.994906008486834148),
    (20.0, 10.0, 5.185956171034962709),
    (20.0, 30.0, -25.121054727823669037),
    (20.0, 100.0, -100.09432950334785236),
    (20.0, 300.0, -301.96120045932179309),
    (20.0, 700.0, -702.7644360884230461),
];
// (a, x, P(a, x))
pub const REG_LOWER_GAMMA: &[(f64, f64, f64)] = &[
    (0.6, 0.1, 0.27089860192931031231),
    (0.6, 1.0, 0.80274047291504092034),
    (0.6, 10.0, 0.99998829308442163109),
    (0.6, 30.0, 0.99999999999998408558),
    (1.5, 0.1, 0.022410702238350600494),
    (1.5, 1.0, 0.427593295529120166),
    (1.5, 10.0, 0.99983025756444717357),
    (1.5, 30.0, 0.99999999999941217693),
    (4.0, 0.1, 3.8468339253450579774e-6),
    (4.0, 1.0, 0.018988156876153809079),
    (4.0, 10.0, 0.98966394932407428213),
    (4.0, 30.0, 0.99999999953389679992),
    (20.0, 0.1, 3.7369603680089009745e-39),
    (20.0, 1.0, 1.5875276010732629572e-19),
    (20.0, 10.0, 0.0034543419758568076822),
    (20.0, 30.0, 0.97812653155860914668),
];
