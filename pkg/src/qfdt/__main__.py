from qfdt.cli import main

main()
