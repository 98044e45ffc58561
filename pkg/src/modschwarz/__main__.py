from modschwarz.cli import main

raise SystemExit(main())
