from qfcanon.cli import main; import sys; sys.exit(main())
