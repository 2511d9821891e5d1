from tropsh.cli import main

main()
