#include "natcat/vulnerability.hpp"

namespace natcat::vuln {

// Seismic fragility curve catalogue: 5 masonry, 11 reinforced-concrete and 1
// other-structure literature models, one record per (model, load class),
// lognormal (mu, sigma) in natural-log PGA units of g. Kwon2010 provides
// gravity-load curves only.
const std::string& default_fragility_catalogue_text() {
    static const std::string text = R"(# fragility curve catalogue
# model <id> structure=<M|RC|A> load=<gravity|seismic> nls=<declared limit states>
model Rota2010 structure=M load=seismic nls=3
-2.03 0.36
-1.65 0.27
-1.35 0.22
end
model Ahmad2011-M structure=M load=seismic nls=4
-1.13 0.35
-1.03 0.35
-0.85 0.26
-0.77 0.23
end
model Erberik2008 structure=M load=seismic nls=2
-0.47 0.35
-0.33 0.35
end
model Lagomarsino2006 structure=M load=seismic nls=3
-1 0.41
-0.75 0.34
-0.61 0.37
end
model Rota2008 structure=M load=seismic nls=3
-0.85 0.24
-0.7 0.18
-0.58 0.14
end
model Kappos2006 structure=RC load=gravity nls=4
-1.78 1.14
-1.12 0.8
-0.7 0.63
-0.59 0.57
end
model Kappos2006 structure=RC load=seismic nls=4
-1.32 0.29
-0.95 0.27
-0.57 0.27
-0.24 0.28
end
model Spence2003 structure=RC load=gravity nls=4
-1.01 0.32
-0.55 0.32
-0.28 0.31
-0.09 0.32
end
model Spence2003 structure=RC load=seismic nls=4
-0.87 0.29
-0.46 0.28
-0.02 0.29
0.15 0.27
end
model Crowley2004 structure=RC load=gravity nls=2
-0.77 0.24
-0.62 0.26
end
model Crowley2004 structure=RC load=seismic nls=2
-0.8 0.18
-0.61 0.22
end
model Ahmad2011-RC structure=RC load=gravity nls=3
-1.07 0.22
-0.91 0.29
-0.59 0.26
end
model Ahmad2011-RC structure=RC load=seismic nls=3
-1.07 0.22
-0.91 0.29
-0.44 0.26
end
model Borzi2008a structure=RC load=gravity nls=2
-0.74 0.32
-0.46 0.34
end
model Borzi2008a structure=RC load=seismic nls=2
-0.56 0.32
-0.37 0.33
end
model Borzi2008b structure=RC load=gravity nls=2
-0.68 0.45
-0.41 0.36
end
model Borzi2008b structure=RC load=seismic nls=2
-0.41 0.35
-0.31 0.35
end
model Kostov2004-RC structure=RC load=gravity nls=3
-0.48 0.47
-0.34 0.48
-0.29 0.48
end
model Kostov2004-RC structure=RC load=seismic nls=3
-0.44 0.48
-0.28 0.49
-0.19 0.49
end
model Kwon2010 structure=RC load=gravity nls=2
-1.08 0.22
-0.73 0.22
end
model Ozmen2010 structure=RC load=gravity nls=2
-0.37 0.35
-0.17 0.23
end
model Ozmen2010 structure=RC load=seismic nls=2
-0.36 0.3
-0.12 0.15
end
model Kappos2003 structure=RC load=gravity nls=4
-1.57 0.44
-0.92 0.44
-0.67 0.44
-0.51 0.44
end
model Kappos2003 structure=RC load=seismic nls=4
-1.14 0.43
-0.57 0.43
-0.18 0.43
0.1 0.43
end
model Tsionis2011 structure=RC load=gravity nls=2
-0.67 0.27
-0.22 0.38
end
model Tsionis2011 structure=RC load=seismic nls=2
-0.64 0.28
0.18 0.79
end
model Kostov2004-A structure=A load=gravity nls=3
-0.62 0.5
-0.44 0.49
-0.35 0.49
end
model Kostov2004-A structure=A load=seismic nls=3
-0.52 0.49
-0.34 0.49
-0.24 0.49
end
)";
    return text;
}

// Depth-percent damage cubics per storey class, averaged literature curves;
// delta_max is the depth where the polynomial reaches 100 percent.
const std::string& default_depth_damage_text() {
    static const std::string text = R"(# depth-percent damage curves
# curve storeys=<1|2|3plus> delta_max=<metres> coeffs=<c0,c1,c2,c3>
curve storeys=1 delta_max=5.059358 coeffs=2.0,35.0,-4.0,0.18
curve storeys=2 delta_max=9.625786 coeffs=1.5,22.0,-1.8,0.06
curve storeys=3plus delta_max=13.463572 coeffs=1.0,16.0,-1.1,0.034
)";
    return text;
}

} // namespace natcat::vuln
