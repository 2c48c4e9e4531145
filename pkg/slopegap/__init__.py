# slopegap package marker
